#pragma once

#include <string>
#include <vector>

namespace fpm::cli {

/// Entry point shared by the fpm binary and the tests.
/// Returns 0 on success, 1 on domain errors, 2 on usage errors.
int run(const std::vector<std::string>& args);

}  // namespace fpm::cli
