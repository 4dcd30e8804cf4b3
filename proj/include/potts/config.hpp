#pragma once

// Flat "key = value" run configuration.
//
//   # comment
//   grid.width = 200
//   network.p_r = 0.02
//   options.preset = 3            # 3 (A, B, 0) or 4 (A, B, AB, 0)
//   utilities.A = 0.6             # one key per adoption state label
//   utilities.distribution = 0.4:0.6, 0.4:0.7, 0.2:0.4
//   innovators.B.rate = 1000      # also .target_fraction, .start_tick
//   launch.t_b = 2                # any launch.* key enables the delayed launch of B
//   run.seed = 7
//
// options.preset is applied first and resets utilities and innovators to that preset's
// defaults; the remaining keys are applied in document order.

#include <string>
#include <string_view>

#include "potts/scenarios.hpp"

namespace potts {

/// Throws ParseError (syntax, with line number) or ConfigError (unknown key or invalid value).
Scenario parse_config(std::string_view document);

/// Canonical document for `scn`; parse_config(emit_config(scn)) == scn.
std::string emit_config(const Scenario& scn);

/// Applies one key = value setting, then re-validates.
void apply_setting(Scenario& scn, std::string_view key, std::string_view value);

/// Splits "key=value" (as given to --set).
std::pair<std::string, std::string> split_assignment(std::string_view text);

}  // namespace potts
