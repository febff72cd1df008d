#include "fpm/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fpm/errors.hpp"

namespace fpm {

namespace {

constexpr double kDegToRad = 3.141592653589793238462643383279 / 180.0;

nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(path + ": " + e.what());
    }
}

}  // namespace

DesignFile load_design(const std::string& path) {
    const nlohmann::json j = parse_json_file(path);
    DesignFile out;
    out.unit = j.value("unit", "mm");
    if (j.contains("links")) {
        const auto& l = j.at("links");
        out.links = LinkSet::from_types(l.at("A").get<double>(), l.at("B").get<double>(),
                                        l.at("C").get<double>(), l.at("D").get<double>());
        return out;
    }
    DesignParams p;
    p.l_c = j.at("L_c").get<double>();
    p.r = j.at("R").get<double>();
    p.h = j.at("H").get<double>();
    p.gamma = j.at("gamma_deg").get<double>() * kDegToRad;
    out.params = p;
    out.links = links_from_design(p);
    return out;
}

void save_design(const std::string& path, const DesignParams& params, const std::string& unit) {
    nlohmann::json j;
    j["L_c"] = params.l_c;
    j["R"] = params.r;
    j["H"] = params.h;
    j["gamma_deg"] = params.gamma / kDegToRad;
    j["unit"] = unit;
    write_text_file(path, j.dump(2) + "\n", true);
}

SurfaceScan load_scan_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    SurfaceScan scan;
    std::string line;
    bool header_seen = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // "x,y,z"
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        double v[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(row, cell, ','))
                throw IoError(path + ": short row at line " + std::to_string(line_no));
            try {
                v[k] = std::stod(cell);
            } catch (const std::exception&) {
                throw IoError(path + ": bad number at line " + std::to_string(line_no));
            }
        }
        scan.points.emplace_back(v[0], v[1], v[2]);
    }
    return scan;
}

void save_scan_csv(const std::string& path, const SurfaceScan& scan, const std::string& unit) {
    std::ostringstream out;
    out.precision(17);
    out << "# unit=" << unit << "\n";
    out << "x,y,z\n";
    for (const Vec3& p : scan.points)
        out << p.x() << ',' << p.y() << ',' << p.z() << '\n';
    write_text_file(path, out.str(), true);
}

ErrorField load_field_json(const std::string& path) {
    const nlohmann::json j = parse_json_file(path);
    ErrorField f;
    f.a = j.at("plane").at("a").get<double>();
    f.b = j.at("plane").at("b").get<double>();
    f.c = j.at("plane").at("c").get<double>();
    f.xs = j.at("grid").at("xs").get<std::vector<double>>();
    f.ys = j.at("grid").at("ys").get<std::vector<double>>();
    f.e = j.at("grid").at("e").get<std::vector<std::vector<double>>>();
    if (f.e.size() != f.ys.size())
        throw IoError(path + ": residual grid has wrong row count");
    for (const auto& row : f.e)
        if (row.size() != f.xs.size())
            throw IoError(path + ": residual grid has a ragged row");
    return f;
}

void save_field_json(const std::string& path, const ErrorField& field) {
    nlohmann::json j;
    j["plane"] = {{"a", field.a}, {"b", field.b}, {"c", field.c}};
    j["grid"] = {{"xs", field.xs}, {"ys", field.ys}, {"e", field.e}};
    write_text_file(path, j.dump(2) + "\n", true);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content, bool force) {
    if (!force && std::filesystem::exists(path))
        throw IoError(path + " exists; pass --force to overwrite");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out << content;
}

}  // namespace fpm
