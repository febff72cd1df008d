#pragma once

#include <optional>
#include <string>

#include "fpm/design.hpp"
#include "fpm/metrology.hpp"

namespace fpm {

inline constexpr const char* kToolVersion = "0.1.0";

/// A design file resolves to a link set either through (L_c, R, H, gamma) or
/// through explicit type lengths; the declared unit rides along.
struct DesignFile {
    LinkSet links;
    std::optional<DesignParams> params;  // present when given parametrically
    std::string unit = "mm";
};

DesignFile load_design(const std::string& path);
void save_design(const std::string& path, const DesignParams& params, const std::string& unit);

SurfaceScan load_scan_csv(const std::string& path);
void save_scan_csv(const std::string& path, const SurfaceScan& scan, const std::string& unit);

ErrorField load_field_json(const std::string& path);
void save_field_json(const std::string& path, const ErrorField& field);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content, bool force);

}  // namespace fpm
