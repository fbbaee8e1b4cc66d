#include "fpt/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fpt/error.hpp"

namespace fpt::io {

using nlohmann::json;

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

namespace {

double number_field(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_number())
        throw InvalidBoundary(std::string("boundary field '") + key + "' must be a number");
    return doc.at(key).get<double>();
}

}  // namespace

Boundary boundary_from_json(const json& doc) {
    if (!doc.is_object()) throw InvalidBoundary("boundary document must be a JSON object");
    if (!doc.contains("kind") || !doc.at("kind").is_string()) throw InvalidBoundary("boundary needs a string 'kind'");
    BoundaryKind kind;
    try {
        kind = boundary_kind_from_string(doc.at("kind").get<std::string>());
    } catch (const InvalidArgument& e) {
        throw InvalidBoundary(e.what());
    }
    const double a = number_field(doc, "a");
    if (kind == BoundaryKind::tabulated) {
        if (!doc.contains("knots") || !doc.at("knots").is_array()) throw InvalidBoundary("tabulated boundary needs 'knots'");
        std::vector<Boundary::Knot> knots;
        for (const auto& k : doc.at("knots")) {
            if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
                throw InvalidBoundary("each knot must be a [t, f] pair of numbers");
            knots.emplace_back(k[0].get<double>(), k[1].get<double>());
        }
        return Boundary::tabulated(a, std::move(knots));
    }
    if (!doc.contains("coefficients") || !doc.at("coefficients").is_array())
        throw InvalidBoundary("polynomial boundary needs 'coefficients'");
    std::vector<double> coefficients;
    for (const auto& c : doc.at("coefficients")) {
        if (!c.is_number()) throw InvalidBoundary("coefficients must be numbers");
        coefficients.push_back(c.get<double>());
    }
    return Boundary::polynomial(kind, a, std::move(coefficients));
}

json boundary_to_json(const Boundary& boundary) {
    json doc{{"kind", to_string(boundary.kind())}, {"a", boundary.a()}};
    if (boundary.kind() == BoundaryKind::tabulated) {
        json knots = json::array();
        for (const auto& [t, f] : boundary.knots()) knots.push_back({t, f});
        doc["knots"] = knots;
    } else {
        doc["coefficients"] = boundary.coefficients();
    }
    return doc;
}

Boundary read_boundary_file(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw InvalidBoundary(path + ": " + e.what());
    }
    return boundary_from_json(doc);
}

std::string density_csv(const DensityCurve& curve) {
    std::string out = "s,phi,ci_low,ci_high,method\n";
    const std::string method = to_string(curve.method);
    for (std::size_t i = 0; i < curve.s_grid.size(); ++i) {
        out += format_number(curve.s_grid[i]) + "," + format_number(curve.phi[i]) + ",";
        if (curve.ci_low) out += format_number((*curve.ci_low)[i]) + "," + format_number((*curve.ci_high)[i]);
        else out += ",";
        out += "," + method + "\n";
    }
    return out;
}

json density_json(const DensityCurve& curve) {
    json doc{{"schema_version", kSchemaVersion},
             {"method", to_string(curve.method)},
             {"boundary_digest", curve.boundary_digest},
             {"s", curve.s_grid},
             {"phi", curve.phi}};
    if (curve.ci_low) {
        doc["ci_low"] = *curve.ci_low;
        doc["ci_high"] = *curve.ci_high;
    }
    return doc;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) cells.push_back(cell);
    if (!line.empty() && line.back() == sep) cells.emplace_back();
    return cells;
}

double parse_number(const std::string& cell) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw InvalidArgument("trailing characters in '" + cell + "'");
        return v;
    } catch (const std::logic_error&) {
        throw InvalidArgument("not a number: '" + cell + "'");
    }
}

}  // namespace

DensityCurve parse_density_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "s,phi,ci_low,ci_high,method")
        throw InvalidArgument("density CSV must start with the header s,phi,ci_low,ci_high,method");
    DensityCurve curve;
    bool banded = false;
    std::vector<double> low, high;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 5) throw InvalidArgument("density CSV rows need five cells");
        curve.s_grid.push_back(parse_number(cells[0]));
        curve.phi.push_back(parse_number(cells[1]));
        if (!cells[2].empty()) {
            banded = true;
            low.push_back(parse_number(cells[2]));
            high.push_back(parse_number(cells[3]));
        }
        curve.method = density_method_from_string(cells[4]);
    }
    if (banded) {
        if (low.size() != curve.phi.size()) throw InvalidArgument("density CSV band is incomplete");
        curve.ci_low = std::move(low);
        curve.ci_high = std::move(high);
    }
    curve.validate();
    return curve;
}

DensityCurve read_density_file(const std::string& path) { return parse_density_csv(read_text(path)); }

std::string envelope_csv(const BoundsEnvelope& envelope) {
    std::string out = "s,lower,upper\n";
    for (std::size_t i = 0; i < envelope.s_grid.size(); ++i)
        out += format_number(envelope.s_grid[i]) + "," + format_number(envelope.lower[i]) + "," +
               format_number(envelope.upper[i]) + "\n";
    return out;
}

json envelope_json(const BoundsEnvelope& envelope) {
    return {{"schema_version", kSchemaVersion}, {"s", envelope.s_grid}, {"lower", envelope.lower}, {"upper", envelope.upper}};
}

std::string field_csv(const FieldGrid& field) {
    std::string out = "t,x,value\n";
    for (Eigen::Index n = 0; n < field.values.rows(); ++n)
        for (Eigen::Index i = 0; i < field.values.cols(); ++i)
            out += format_number(field.t_grid(n)) + "," + format_number(field.x_grid(i)) + "," +
                   format_number(field.values(n, i)) + "\n";
    return out;
}

std::string paths_csv(const PathBatch& batch) {
    std::string out = "path_id,t,x\n";
    for (std::size_t p = 0; p < batch.n_paths; ++p)
        for (int k = 0; k <= batch.n_steps; ++k)
            out += std::to_string(p) + "," + format_number(batch.time(k)) + "," +
                   format_number(batch.values(static_cast<Eigen::Index>(p), k)) + "\n";
    return out;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidArgument("cannot write '" + temp.string() + "'");
        out << content;
        if (!out.flush()) {
            std::filesystem::remove(temp);
            throw InvalidArgument("write to '" + temp.string() + "' failed");
        }
    }
    std::filesystem::rename(temp, target);
}

}  // namespace fpt::io
