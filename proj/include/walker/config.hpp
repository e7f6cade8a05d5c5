#pragma once

#include <string>
#include <string_view>

#include "walker/classify.hpp"

namespace walker {

struct RunConfig {
    double zero_tol = 1e-12;
    double ode_tol = 1e-10;
    double residual_tol = 1e-8;
    int jet_order = 10;
    Grid grid{};
    int cotton_sign = +1;

    /// Throws DomainError on tolerances <= 0, jet order < 4 or a sign other than +-1.
    void validate() const;
};

/// Applies one `key = value` assignment. Unknown keys and malformed values throw ParseError.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses a key=value file body; '#' starts a comment, blank lines are skipped.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// "NX,NY,X0,X1,Y0,Y1".
Grid parse_grid(std::string_view text);

}  // namespace walker
