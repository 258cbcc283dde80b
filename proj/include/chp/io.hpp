#pragma once

// Persistence and presentation: configuration files (JSON), classification
// tables (CSV) and static diagrams (SVG). Every writer is deterministic.

#include "chp/border.hpp"
#include "chp/configuration.hpp"
#include "chp/validation.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace chp {

inline constexpr std::string_view kSchemaVersion = "chp-pack/1";

/// Shortest decimal text that round-trips: 17 significant digits.
std::string format_real(double x);

/// Configuration file text; coordinates at 17 significant digits.
std::string config_to_json(const PackingConfiguration& config);

/// Throws SchemaMismatch for an unknown schema_version and ParseError (with
/// line or field context) for malformed content.
PackingConfiguration config_from_json(std::string_view text);

void write_config(const PackingConfiguration& config, const std::filesystem::path& path);
PackingConfiguration read_config(const std::filesystem::path& path);

std::string border_to_json(const BorderSolution& border);
std::string report_to_json(const ValidationReport& report);

struct TableRow {
    int sigma = 0;
    int k = 0;
    int building_blocks = 0;
    std::vector<int> degeneracies;
    int eta = 0;
    int n_vertices = 0;
    int k_mod = 0;                         ///< k mod sigma/6
    long long enumerated_count = -1;       ///< -1 when enumeration was skipped
    std::string formula_count;             ///< exact decimal
};

/// One classification row; enumeration runs only when the formula count is <= enumerate_cap.
TableRow table_row(int sigma, int k, std::size_t enumerate_cap);

/// Rows in the order given, under the header of the golden table file.
std::string tables_to_csv(const std::vector<TableRow>& rows);

struct SvgOptions {
    double size = 600.0;  ///< pixel width and height
    bool contacts = false;
    bool fundamental_domain = false;
};

/// Container (delta = r outline), disks of radius diameter / 2, optional contact
/// edges and fundamental-sector shading. Byte-identical for identical input.
std::string render_svg(const PackingConfiguration& config, const SvgOptions& options = {});

}  // namespace chp
