#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nsac/grid.hpp"

namespace nsac {

/// Sidecar of a field snapshot: `<name>.bin` holds nx*ny little-endian
/// float64 values row-major (x fastest), `<name>.json` this record.
struct SnapshotMeta {
    std::string name;
    double t = 0.0;
    int nx = 0;
    int ny = 0;
    double Lx = 1.0;
    double Ly = 1.0;
    BoundaryMode bc = BoundaryMode::dirichlet_wall;
};

void write_snapshot(const std::filesystem::path& dir, const std::string& name, const ScalarField& field, double t);

/// Reads `<stem>.bin` and its sidecar; throws ConfigError on a missing or
/// inconsistent pair.
ScalarField read_snapshot(const std::filesystem::path& bin_path, SnapshotMeta* meta = nullptr);

/// Shortest round-trip decimal form ("nan", "inf", "-inf" for non-finite).
std::string format_double(double value);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns);
    void row(const std::vector<double>& values);
    const std::vector<std::string>& columns() const { return columns_; }

private:
    std::ofstream out_;
    std::vector<std::string> columns_;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Throws ConfigError if the column does not exist.
    std::vector<double> column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace nsac
