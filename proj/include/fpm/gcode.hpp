#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpm/design.hpp"
#include "fpm/metrology.hpp"

namespace fpm {

enum class GKind { RapidMove, LinearMove, Home, AbsoluteMode, RelativeMode };

struct GCommand {
    GKind kind = GKind::LinearMove;
    std::optional<double> x, y, z;
    std::optional<double> f;  // feed, carried through unmodified
    int line = 0;
};

struct JointSample {
    int index = 0;
    double alpha = 0.0;  // radians
    double beta = 0.0;   // radians
    double z = 0.0;
    int source_line = 0;
};

struct PlanConfig {
    double max_segment = 1.0;
    double workspace_rel = 0.4;        // reachable disc diameter over L_c
    double joint_limit = 1.5707963267948966;  // |alpha|, |beta| bound, radians
};

/// Line-oriented parse of the frozen dialect {G0, G1, G28, G90, G91} with
/// X/Y/Z/F words. Comments (';' to end of line, parenthesized inline) are
/// stripped; anything else fails loudly with its line number.
std::vector<GCommand> parse_gcode(const std::string& text);

std::string serialize_gcode(const std::vector<GCommand>& cmds);

/// Converts commands into joint samples: maintains machine state, chops each
/// move into segments of at most max_segment, and runs the inverse kinematics
/// at every segment endpoint. A supplied error field pre-compensates the
/// commanded z by +e_hat(x, y).
std::vector<JointSample> plan_trajectory(const std::vector<GCommand>& cmds,
                                         const LinkSet& links,
                                         const ErrorField* field,
                                         double max_segment);
std::vector<JointSample> plan_trajectory(const std::vector<GCommand>& cmds,
                                         const LinkSet& links,
                                         const ErrorField* field,
                                         const PlanConfig& cfg);

}  // namespace fpm
