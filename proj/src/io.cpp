#include "nsac/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "nsac/errors.hpp"

namespace nsac {

static_assert(std::endian::native == std::endian::little, "snapshot format assumes a little-endian host");

void write_snapshot(const std::filesystem::path& dir, const std::string& name, const ScalarField& field, double t) {
    std::filesystem::create_directories(dir);
    const Grid2D& g = field.grid();
    {
        std::ofstream bin(dir / (name + ".bin"), std::ios::binary);
        if (!bin) throw Error("cannot write snapshot " + (dir / (name + ".bin")).string());
        bin.write(reinterpret_cast<const char*>(field.data()),
                  static_cast<std::streamsize>(field.size() * sizeof(double)));
    }
    nlohmann::ordered_json meta = {{"name", name}, {"t", t},   {"nx", g.nx},
                                   {"ny", g.ny},   {"Lx", g.Lx}, {"Ly", g.Ly}, {"bc", to_string(g.bc)}};
    std::ofstream side(dir / (name + ".json"));
    side << meta.dump(2) << '\n';
}

ScalarField read_snapshot(const std::filesystem::path& bin_path, SnapshotMeta* meta_out) {
    std::filesystem::path side_path = bin_path;
    side_path.replace_extension(".json");
    std::ifstream side(side_path);
    if (!side) throw ConfigError("missing snapshot sidecar " + side_path.string());
    SnapshotMeta meta;
    try {
        const nlohmann::json j = nlohmann::json::parse(side);
        meta.name = j.at("name").get<std::string>();
        meta.t = j.at("t").get<double>();
        meta.nx = j.at("nx").get<int>();
        meta.ny = j.at("ny").get<int>();
        meta.Lx = j.at("Lx").get<double>();
        meta.Ly = j.at("Ly").get<double>();
        meta.bc = boundary_mode_from_string(j.at("bc").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed snapshot sidecar " + side_path.string() + ": " + e.what());
    }
    const Grid2D grid = Grid2D::make(meta.nx, meta.ny, meta.Lx, meta.Ly, meta.bc);
    ScalarField field(grid);
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw ConfigError("missing snapshot " + bin_path.string());
    const auto bytes = static_cast<std::streamsize>(field.size() * sizeof(double));
    bin.read(reinterpret_cast<char*>(field.data()), bytes);
    if (bin.gcount() != bytes || bin.peek() != std::char_traits<char>::eof())
        throw ConfigError("snapshot " + bin_path.string() + " does not match its sidecar size");
    if (meta_out) *meta_out = meta;
    return field;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns)
    : out_(path), columns_(std::move(columns)) {
    if (!out_) throw Error("cannot write " + path.string());
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) throw std::invalid_argument("csv row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
    out_ << '\n';
    out_.flush();
}

bool CsvTable::has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ConfigError("csv has no column '" + name + "'");
    const std::size_t k = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(k));
    return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty csv " + path.string());
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("non-numeric csv cell '" + cell + "' in " + path.string());
            }
        }
        if (row.size() != table.columns.size()) throw ConfigError("ragged csv row in " + path.string());
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace nsac
