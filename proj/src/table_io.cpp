#include "tetra/table_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tetra/errors.hpp"
#include "tetra/format.hpp"

namespace tetra {

std::string table_to_json(const TetrationTable& table) {
    const auto& fp = table.fixed_point();
    std::string out = "{\n";
    out += "  \"base\": " + format_number(table.base().value()) + ",\n";
    out += "  \"L\": [" + format_number(fp.L.real()) + ", " + format_number(fp.L.imag()) + "],\n";
    out += "  \"A\": " + format_number(table.height()) + ",\n";
    out += "  \"N\": " + std::to_string(table.params().n_nodes) + ",\n";
    out += "  \"residual\": " + format_number(table.final_residual()) + ",\n";
    out += "  \"nodes\": [\n";
    const auto& nodes = table.nodes();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        out += "    [" + format_number(nodes[k].y) + ", " + format_number(nodes[k].f.real()) + ", " +
               format_number(nodes[k].f.imag()) + "]";
        out += k + 1 < nodes.size() ? ",\n" : "\n";
    }
    out += "  ]\n}\n";
    return out;
}

TetrationTable table_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidTable, std::string("table is not valid JSON: ") + e.what());
    }
    try {
        const Base b(j.at("base").get<double>());
        const FixedPointData fp = principal_fixed_point(b);
        const cplx stored{j.at("L").at(0).get<double>(), j.at("L").at(1).get<double>()};
        if (std::abs(stored - fp.L) > 1e-12)
            throw Error(ErrorCode::InvalidTable, "stored fixed point does not match the base");
        SolverParams params;
        params.height = j.at("A").get<double>();
        params.n_nodes = j.at("N").get<int>();
        std::vector<Node> nodes;
        for (const auto& row : j.at("nodes")) {
            nodes.push_back(Node{row.at(0).get<double>(),
                                 cplx{row.at(1).get<double>(), row.at(2).get<double>()}});
        }
        return TetrationTable(fp, params, std::move(nodes));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidTable, std::string("table field missing or mistyped: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument)
            throw Error(ErrorCode::InvalidTable, e.what());
        throw;
    }
}

void save_table(const TetrationTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << table_to_json(table);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

TetrationTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingTable, "table not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return table_from_json(buf.str());
}

}  // namespace tetra
