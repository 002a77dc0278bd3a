#pragma once

#include <string>
#include <vector>

#include "burstgate/types.hpp"

namespace burstgate {

/// Structural problems a Scenario can have. validate_scenario() returns every
/// violation found, not just the first, so a config error message can list
/// them all at once.
enum class Violation {
    empty_flows,
    non_positive_duration,
    negative_start_window,
    start_window_exceeds_duration,
    zero_capacity,
    negative_network_delay,
    zero_buffer_limit,
    invalid_flow_param,
};

const char* to_string(Violation v);

std::vector<Violation> validate_scenario(const Scenario& s);

/// Throws ConfigError listing every violation; no-op on a valid scenario.
void require_valid(const Scenario& s);

/// Long-run average rate of one flow in bits/s. Honors rate_override_bps.
/// For trace flows the records must already be loaded.
double flow_rate_bps(const FlowSpec& flow);

/// Sum of flow rates: the nominal load offered to the link.
double offered_load_bps(const Scenario& s);

/// offered_load / capacity. The scenario's buffer plays no part.
double utilization(const Scenario& s);

/// Parse a scenario from a JSON file. Unknown keys anywhere in the document
/// are a ConfigError, as are missing required keys and type mismatches.
/// Trace flows get their records loaded relative to the JSON file's
/// directory.
Scenario load_scenario(const std::string& path);

/// Same, but from an already-parsed JSON string (trace paths resolve against
/// `base_dir`, or the working directory when empty).
Scenario parse_scenario(const std::string& json_text, const std::string& base_dir = "");

} // namespace burstgate
