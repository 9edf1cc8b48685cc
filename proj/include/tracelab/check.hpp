#ifndef TRACELAB_CHECK_HPP
#define TRACELAB_CHECK_HPP

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace tracelab {

// Outcome of one verification suite.  `detail` carries the first
// counterexample when ok == false.
struct CheckResult {
    bool ok = true;
    std::string detail;

    static CheckResult pass() { return {}; }
    static CheckResult fail(std::string d) { return {false, std::move(d)}; }
};

struct NamedCheck {
    std::string name;
    CheckResult result;
};

inline bool all_ok(const std::vector<NamedCheck>& checks) {
    for (const auto& c : checks)
        if (!c.result.ok) return false;
    return true;
}

} // namespace tracelab

#endif
