#ifndef TRACELAB_SUBSHIFT_COUNTING_HPP
#define TRACELAB_SUBSHIFT_COUNTING_HPP

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracelab/check.hpp"
#include "tracelab/params.hpp"
#include "tracelab/rational.hpp"

namespace tracelab {

// Number of distinct length-n trace words:
//   P(n) = pq (p^(n-1) - q^(n-1)) (q-1)/(p-q) + p^n q,  requires p > q.
inline BigInt complexity_closed_form(int n, const Params& pr) {
    pr.require_p_gt_q("complexity_closed_form");
    if (n < 1) throw PreconditionError("complexity_closed_form: n must be >= 1");
    const BigInt p = pr.p(), q = pr.q();
    const BigInt num = BigInt(pr.base()) *
                       (ipow(p, static_cast<unsigned>(n - 1)) - ipow(q, static_cast<unsigned>(n - 1))) *
                       (q - 1);
    const BigInt den = p - q;
    if (num % den != 0)
        throw NonIntegral("complexity_closed_form: division by p-q is not exact");
    return num / den + ipow(p, static_cast<unsigned>(n)) * q;
}

// Coefficients a[0..N] of the counting series: rational with denominator
// (1-pz)(1-qz), hence a[0] = 1, a[1] = pq and
//   a[n] = (p+q) a[n-1] - pq a[n-2]  for n >= 2.
// Each coefficient is checked against the closed form on the way.
inline std::vector<BigInt> gf_coefficients(int N, const Params& pr) {
    pr.require_p_gt_q("gf_coefficients");
    if (N < 0) throw PreconditionError("gf_coefficients: N must be >= 0");
    std::vector<BigInt> a;
    a.reserve(static_cast<std::size_t>(N) + 1);
    a.push_back(1);
    if (N >= 1) a.push_back(pr.base());
    for (int n = 2; n <= N; ++n)
        a.push_back(BigInt(pr.p() + pr.q()) * a[static_cast<std::size_t>(n - 1)] -
                    BigInt(pr.base()) * a[static_cast<std::size_t>(n - 2)]);
    for (int n = 1; n <= N; ++n)
        if (a[static_cast<std::size_t>(n)] != complexity_closed_form(n, pr))
            throw NonIntegral("gf_coefficients: recurrence disagrees with closed form at n=" +
                              std::to_string(n));
    return a;
}

// Finite directed graph with labeled edges; the object presenting a sofic
// shift as the labels of its bi-infinite paths.
struct LabeledGraph {
    struct Edge {
        int from;
        int to;
        int label;
    };

    std::vector<std::string> vertex_names;
    std::vector<std::string> alphabet; // label id -> label text
    std::vector<Edge> edges;

    int add_vertex(const std::string& name) {
        for (std::size_t i = 0; i < vertex_names.size(); ++i)
            if (vertex_names[i] == name) return static_cast<int>(i);
        vertex_names.push_back(name);
        return static_cast<int>(vertex_names.size()) - 1;
    }

    int add_label(const std::string& name) {
        for (std::size_t i = 0; i < alphabet.size(); ++i)
            if (alphabet[i] == name) return static_cast<int>(i);
        alphabet.push_back(name);
        return static_cast<int>(alphabet.size()) - 1;
    }

    void add_edge(const std::string& from, const std::string& to, const std::string& label) {
        edges.push_back({add_vertex(from), add_vertex(to), add_label(label)});
    }

    int vertex_count() const { return static_cast<int>(vertex_names.size()); }
};

// Plain text edge list, one edge per line: "from to label".
inline LabeledGraph parse_edge_list(std::istream& in) {
    LabeledGraph g;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string from, to, label, extra;
        if (!(ls >> from)) continue; // blank line
        if (from[0] == '#') continue;
        if (!(ls >> to >> label) || (ls >> extra))
            throw ParseError("edge list line " + std::to_string(lineno) +
                             ": expected 'from to label'");
        g.add_edge(from, to, label);
    }
    return g;
}

inline void write_edge_list(std::ostream& out, const LabeledGraph& g) {
    for (const auto& e : g.edges)
        out << g.vertex_names[static_cast<std::size_t>(e.from)] << ' '
            << g.vertex_names[static_cast<std::size_t>(e.to)] << ' '
            << g.alphabet[static_cast<std::size_t>(e.label)] << '\n';
}

// Presentation of the sofic shift with language P* (eps|R) Q* over disjoint
// alphabets of sizes p, q and pq-p-q: two looped vertices, direct crossings
// labeled by Q letters and crossings through each R letter.  Its complexity
// function equals the trace-language closed form.
inline LabeledGraph build_Zpq(const Params& pr) {
    pr.require_p_gt_q("build_Zpq");
    const int r_count = pr.base() - pr.p() - pr.q();
    if (r_count < 1)
        throw ConsistencyViolation("build_Zpq: pq-p-q must be positive for coprime p > q > 1");
    LabeledGraph g;
    const auto letter = [](const char* prefix, int i) {
        return std::string(prefix) + std::to_string(i);
    };
    for (int i = 0; i < pr.p(); ++i) g.add_edge("P", "P", letter("p", i));
    for (int i = 0; i < pr.q(); ++i) g.add_edge("Q", "Q", letter("q", i));
    for (int i = 0; i < pr.q(); ++i) g.add_edge("P", "Q", letter("q", i));
    for (int i = 0; i < r_count; ++i) g.add_edge("P", "Q", letter("r", i));
    return g;
}

// Four vertices on a cycle, every vertex carrying self-loops a and b, the
// cycle edges labeled c, d, e, f.  A transitive presentation whose label
// count is 4*3^n - 3*2^n.
inline LabeledGraph build_transitive_32() {
    LabeledGraph g;
    const std::string v[4] = {"v0", "v1", "v2", "v3"};
    for (int i = 0; i < 4; ++i) {
        g.add_edge(v[i], v[i], "a");
        g.add_edge(v[i], v[i], "b");
    }
    g.add_edge(v[0], v[1], "c");
    g.add_edge(v[1], v[2], "d");
    g.add_edge(v[2], v[3], "e");
    g.add_edge(v[3], v[0], "f");
    return g;
}

namespace detail {

// Iteratively removes vertices without both an incoming and an outgoing
// edge; what survives is exactly the part usable by bi-infinite paths.
inline LabeledGraph bi_essential(const LabeledGraph& g) {
    const int n = g.vertex_count();
    std::vector<bool> alive(static_cast<std::size_t>(n), true);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> in_deg(static_cast<std::size_t>(n), 0);
        std::vector<int> out_deg(static_cast<std::size_t>(n), 0);
        for (const auto& e : g.edges) {
            if (!alive[static_cast<std::size_t>(e.from)] || !alive[static_cast<std::size_t>(e.to)])
                continue;
            ++out_deg[static_cast<std::size_t>(e.from)];
            ++in_deg[static_cast<std::size_t>(e.to)];
        }
        for (int v = 0; v < n; ++v) {
            if (alive[static_cast<std::size_t>(v)] &&
                (in_deg[static_cast<std::size_t>(v)] == 0 ||
                 out_deg[static_cast<std::size_t>(v)] == 0)) {
                alive[static_cast<std::size_t>(v)] = false;
                changed = true;
            }
        }
    }
    LabeledGraph out;
    out.alphabet = g.alphabet; // keep label ids stable
    for (const auto& e : g.edges) {
        if (!alive[static_cast<std::size_t>(e.from)] || !alive[static_cast<std::size_t>(e.to)])
            continue;
        out.edges.push_back({out.add_vertex(g.vertex_names[static_cast<std::size_t>(e.from)]),
                             out.add_vertex(g.vertex_names[static_cast<std::size_t>(e.to)]),
                             e.label});
    }
    return out;
}

struct SubsetAutomaton {
    std::uint64_t full = 0;
    int label_count = 0;
    std::vector<std::uint64_t> step_mask; // [vertex * label_count + label] -> target set

    explicit SubsetAutomaton(const LabeledGraph& g) {
        const int n = g.vertex_count();
        if (n > 64) throw BudgetExceeded("subset automaton limited to 64 vertices");
        label_count = static_cast<int>(g.alphabet.size());
        step_mask.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(label_count), 0);
        for (const auto& e : g.edges)
            step_mask[static_cast<std::size_t>(e.from) * label_count +
                      static_cast<std::size_t>(e.label)] |= std::uint64_t{1} << e.to;
        for (int v = 0; v < n; ++v) full |= std::uint64_t{1} << v;
    }

    std::uint64_t step(std::uint64_t set, int label) const {
        std::uint64_t out = 0;
        std::uint64_t s = set;
        while (s) {
            const int v = __builtin_ctzll(s);
            out |= step_mask[static_cast<std::size_t>(v) * label_count +
                             static_cast<std::size_t>(label)];
            s &= s - 1;
        }
        return out;
    }
};

} // namespace detail

// Number of distinct length-n words readable along bi-infinitely extendable
// paths: prune to the bi-essential subgraph, then count paths of the
// determinized subset automaton level by level.  Distinct words map to
// distinct subset paths, so the level sums are exact word counts.
inline BigInt count_distinct_labels(const LabeledGraph& g, int n,
                                    std::size_t state_cap = std::size_t{1} << 20) {
    if (n < 0) throw PreconditionError("count_distinct_labels: n must be >= 0");
    const LabeledGraph core = detail::bi_essential(g);
    if (core.vertex_count() == 0) return 0;
    if (n == 0) return 1;
    const detail::SubsetAutomaton aut(core);
    std::map<std::uint64_t, BigInt> level{{aut.full, BigInt(1)}};
    for (int t = 0; t < n; ++t) {
        std::map<std::uint64_t, BigInt> next;
        for (const auto& [set, cnt] : level) {
            for (int a = 0; a < aut.label_count; ++a) {
                const std::uint64_t img = aut.step(set, a);
                if (img) next[img] += cnt;
            }
        }
        if (next.size() > state_cap)
            throw BudgetExceeded("count_distinct_labels: subset frontier exceeds cap");
        level = std::move(next);
    }
    BigInt total = 0;
    for (const auto& [set, cnt] : level) total += cnt;
    return total;
}

namespace detail {

inline bool strongly_connected(const LabeledGraph& g) {
    const int n = g.vertex_count();
    if (n == 0) return false;
    auto reaches_all = [&](bool forward) {
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        std::vector<int> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (const auto& e : g.edges) {
                const int from = forward ? e.from : e.to;
                const int to = forward ? e.to : e.from;
                if (from == v && !seen[static_cast<std::size_t>(to)]) {
                    seen[static_cast<std::size_t>(to)] = true;
                    stack.push_back(to);
                }
            }
        }
        for (bool b : seen)
            if (!b) return false;
        return true;
    };
    return reaches_all(true) && reaches_all(false);
}

} // namespace detail

// Searches words of length 1..max_len for one that focuses the determinized
// follower automaton: every context leading to the word leaves it in the
// same subset state, which makes the word synchronizing.  Requires an
// irreducible presentation (pruned graph strongly connected).
inline std::optional<std::vector<std::string>> find_synchronizing_word(const LabeledGraph& g,
                                                                       int max_len) {
    const LabeledGraph core = detail::bi_essential(g);
    if (core.vertex_count() == 0 || !detail::strongly_connected(core))
        throw PreconditionError("find_synchronizing_word: presentation is not irreducible");
    const detail::SubsetAutomaton aut(core);

    // all subset states reachable from the full set by any word
    std::vector<std::uint64_t> reach{aut.full};
    {
        std::vector<std::uint64_t> stack{aut.full};
        while (!stack.empty()) {
            const std::uint64_t s = stack.back();
            stack.pop_back();
            for (int a = 0; a < aut.label_count; ++a) {
                const std::uint64_t img = aut.step(s, a);
                if (img == 0) continue;
                if (std::find(reach.begin(), reach.end(), img) == reach.end()) {
                    reach.push_back(img);
                    stack.push_back(img);
                }
            }
        }
    }

    std::vector<int> word;
    auto test = [&]() {
        std::uint64_t focus = 0;
        bool any = false;
        for (const std::uint64_t s : reach) {
            std::uint64_t cur = s;
            for (int a : word) {
                cur = aut.step(cur, a);
                if (cur == 0) break;
            }
            if (cur == 0) continue;
            if (!any) {
                focus = cur;
                any = true;
            } else if (cur != focus) {
                return false;
            }
        }
        return any;
    };

    for (int len = 1; len <= max_len; ++len) {
        word.assign(static_cast<std::size_t>(len), 0);
        for (;;) {
            if (test()) {
                std::vector<std::string> labels;
                for (int a : word) labels.push_back(core.alphabet[static_cast<std::size_t>(a)]);
                return labels;
            }
            int k = len - 1;
            while (k >= 0 && word[static_cast<std::size_t>(k)] == aut.label_count - 1) {
                word[static_cast<std::size_t>(k)] = 0;
                --k;
            }
            if (k < 0) break;
            ++word[static_cast<std::size_t>(k)];
        }
    }
    return std::nullopt;
}

} // namespace tracelab

#endif
