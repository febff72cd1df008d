#include "fpm/gcode.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "fpm/errors.hpp"
#include "fpm/kinematics.hpp"

namespace fpm {

namespace {

std::string strip_comments(const std::string& line, int line_no) {
    std::string out;
    bool in_paren = false;
    for (char ch : line) {
        if (in_paren) {
            if (ch == ')') in_paren = false;
            continue;
        }
        if (ch == '(') {
            in_paren = true;
            continue;
        }
        if (ch == ';') break;
        out.push_back(ch);
    }
    if (in_paren)
        throw ParseError(line_no, "(", "unterminated parenthesized comment");
    return out;
}

struct Word {
    char letter;
    double value;
    std::string text;
};

std::vector<Word> split_words(const std::string& line, int line_no) {
    std::vector<Word> words;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(line[i])));
        if (!std::isalpha(static_cast<unsigned char>(line[i])))
            throw ParseError(line_no, std::string(1, line[i]), "expected a word letter");
        std::size_t j = i + 1;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
               !std::isalpha(static_cast<unsigned char>(line[j])))
            ++j;
        std::string num = line.substr(i + 1, j - i - 1);
        if (!num.empty() && num.front() == '+') num.erase(0, 1);
        double value = 0.0;
        const char* first = num.data();
        const char* last = num.data() + num.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (num.empty() || ec != std::errc() || ptr != last)
            throw ParseError(line_no, line.substr(i, j - i), "malformed number");
        words.push_back({letter, value, line.substr(i, j - i)});
        i = j;
    }
    return words;
}

}  // namespace

std::vector<GCommand> parse_gcode(const std::string& text) {
    std::vector<GCommand> cmds;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = strip_comments(raw, line_no);
        const std::vector<Word> words = split_words(line, line_no);
        if (words.empty()) continue;

        const Word& head = words.front();
        if (head.letter != 'G')
            throw UnsupportedCommand(line_no, head.text, "command is not a supported G-code");
        const int code = static_cast<int>(std::lround(head.value));
        if (head.value != code)
            throw ParseError(line_no, head.text, "non-integer G code");

        GCommand cmd;
        cmd.line = line_no;
        switch (code) {
            case 0: cmd.kind = GKind::RapidMove; break;
            case 1: cmd.kind = GKind::LinearMove; break;
            case 28: cmd.kind = GKind::Home; break;
            case 90: cmd.kind = GKind::AbsoluteMode; break;
            case 91: cmd.kind = GKind::RelativeMode; break;
            default:
                throw UnsupportedCommand(line_no, head.text, "G code outside the frozen dialect");
        }

        const bool is_move = cmd.kind == GKind::RapidMove || cmd.kind == GKind::LinearMove;
        for (std::size_t k = 1; k < words.size(); ++k) {
            const Word& w = words[k];
            if (!is_move)
                throw ParseError(cmd.line, w.text, "command takes no arguments");
            switch (w.letter) {
                case 'X': cmd.x = w.value; break;
                case 'Y': cmd.y = w.value; break;
                case 'Z': cmd.z = w.value; break;
                case 'F': cmd.f = w.value; break;
                default:
                    throw ParseError(cmd.line, w.text, "unsupported word letter");
            }
            if (!std::isfinite(w.value))
                throw ParseError(cmd.line, w.text, "non-finite coordinate");
        }
        if (is_move && !cmd.x && !cmd.y && !cmd.z)
            throw ParseError(cmd.line, head.text, "move carries no axis word");
        cmds.push_back(cmd);
    }
    return cmds;
}

std::string serialize_gcode(const std::vector<GCommand>& cmds) {
    std::ostringstream out;
    out.precision(17);
    for (const GCommand& cmd : cmds) {
        switch (cmd.kind) {
            case GKind::RapidMove: out << "G0"; break;
            case GKind::LinearMove: out << "G1"; break;
            case GKind::Home: out << "G28"; break;
            case GKind::AbsoluteMode: out << "G90"; break;
            case GKind::RelativeMode: out << "G91"; break;
        }
        if (cmd.x) out << " X" << *cmd.x;
        if (cmd.y) out << " Y" << *cmd.y;
        if (cmd.z) out << " Z" << *cmd.z;
        if (cmd.f) out << " F" << *cmd.f;
        out << '\n';
    }
    return out.str();
}

std::vector<JointSample> plan_trajectory(const std::vector<GCommand>& cmds,
                                         const LinkSet& links,
                                         const ErrorField* field,
                                         double max_segment) {
    PlanConfig cfg;
    cfg.max_segment = max_segment;
    return plan_trajectory(cmds, links, field, cfg);
}

std::vector<JointSample> plan_trajectory(const std::vector<GCommand>& cmds,
                                         const LinkSet& links,
                                         const ErrorField* field,
                                         const PlanConfig& cfg) {
    if (!(cfg.max_segment > 0.0))
        throw Error("plan_trajectory: max_segment must be positive");
    if (!validate_links(links).valid)
        throw InvalidLinks("plan_trajectory: invalid link set");

    const double l_c = links.characteristic_length();
    const double reach = cfg.workspace_rel * l_c / 2.0;

    std::vector<JointSample> samples;
    Vec3 pos = Vec3::Zero();
    bool absolute = true;
    int index = 0;

    auto emit = [&](const Vec3& target, int line) {
        if (std::hypot(target.x(), target.y()) > reach) {
            std::ostringstream msg;
            msg << "plan_trajectory: target (" << target.x() << ", " << target.y()
                << ") at line " << line << " is outside the workspace disc (radius "
                << reach << ")";
            throw OutOfWorkspace(msg.str());
        }
        const JointAngles joints = inverse(links, target.x(), target.y());
        if (std::abs(joints.alpha) > cfg.joint_limit || std::abs(joints.beta) > cfg.joint_limit) {
            std::ostringstream msg;
            msg << "plan_trajectory: joint limit exceeded at line " << line;
            throw OutOfWorkspace(msg.str());
        }
        double z_cmd = target.z();
        if (field) z_cmd += interpolate_error(*field, target.x(), target.y());
        samples.push_back({index++, joints.alpha, joints.beta, z_cmd, line});
    };

    for (const GCommand& cmd : cmds) {
        switch (cmd.kind) {
            case GKind::AbsoluteMode: absolute = true; break;
            case GKind::RelativeMode: absolute = false; break;
            case GKind::Home:
                pos = Vec3::Zero();
                emit(pos, cmd.line);
                break;
            case GKind::RapidMove:
            case GKind::LinearMove: {
                Vec3 target = pos;
                if (absolute) {
                    if (cmd.x) target.x() = *cmd.x;
                    if (cmd.y) target.y() = *cmd.y;
                    if (cmd.z) target.z() = *cmd.z;
                } else {
                    if (cmd.x) target.x() += *cmd.x;
                    if (cmd.y) target.y() += *cmd.y;
                    if (cmd.z) target.z() += *cmd.z;
                }
                const double length = (target - pos).norm();
                const int n_seg = std::max(1, static_cast<int>(std::ceil(length / cfg.max_segment)));
                for (int s = 1; s <= n_seg; ++s) {
                    const Vec3 p = pos + (target - pos) * (static_cast<double>(s) / n_seg);
                    emit(p, cmd.line);
                }
                pos = target;
                break;
            }
        }
    }
    return samples;
}

}  // namespace fpm
