// tracelab: exact workbench for base-pq fractional multiplication automata.
//
// Subcommands: simulate, language, companion, sofic, verify, mahler-search,
// constrained-prefix.  All numeric inputs are exact strings; outputs are
// CSV, plain ASCII diagrams or P2 PGM images.  Exit codes: 0 success,
// 1 failed verification, 2 bad input, 3 budget refused.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tracelab/mahler.hpp"
#include "tracelab/numbers.hpp"
#include "tracelab/representations.hpp"
#include "tracelab/subshift_counting.hpp"
#include "tracelab/trace_language.hpp"
#include "tracelab/verify.hpp"

namespace {

using namespace tracelab;

struct RunConfig {
    int p = 0;
    int q = 0;
    int threads = 0;
    std::uint64_t seed = 20240917;
    std::optional<std::uint64_t> budget_flag;
    std::string out_path;

    Params params() const { return Params(p, q); }

    Budget budget() const {
        Budget b = Budget::from_env();
        if (budget_flag) b.max_windows = *budget_flag;
        return b;
    }

    // Writes to --out when given, stdout otherwise.
    void emit(const std::string& text) const {
        if (out_path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw ParseError("cannot open output file '" + out_path + "'");
        f << text;
    }
};

std::pair<long long, long long> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos)
        throw ParseError("range must look like 'lo..hi', got '" + s + "'");
    try {
        const long long lo = std::stoll(s.substr(0, dots));
        const long long hi = std::stoll(s.substr(dots + 2));
        if (lo > hi) throw ParseError("empty range '" + s + "'");
        return {lo, hi};
    } catch (const std::invalid_argument&) {
        throw ParseError("range must look like 'lo..hi', got '" + s + "'");
    } catch (const std::out_of_range&) {
        throw ParseError("range bounds out of range in '" + s + "'");
    }
}

int cmd_simulate(const RunConfig& rc, const std::string& value, const std::string& config_path,
                 int steps, const std::string& window, const std::string& format) {
    const Params pr = rc.params();
    const Rules R(pr);

    Configuration x;
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw ParseError("cannot open configuration file '" + config_path + "'");
        std::string line;
        if (!std::getline(f, line)) throw ParseError("empty configuration file");
        x = Configuration::from_text(line, pr);
    } else {
        const Rational xi = parse_rational(value.empty() ? "1" : value);
        x = encode(xi, pr);
    }

    long long lo, hi;
    if (!window.empty()) {
        std::tie(lo, hi) = parse_range(window);
    } else {
        // fit the whole evolution, always including the units column
        lo = std::min<long long>(x.offset(), 0);
        hi = std::max<long long>(x.core_end(), 1);
        Configuration cur = x;
        for (int t = 1; t < steps; ++t) {
            cur = apply(cur, R, AutomatonKind::fmul_p_over_q);
            lo = std::min(lo, cur.offset());
            hi = std::max(hi, cur.core_end());
        }
    }
    const unsigned long long cells = static_cast<unsigned long long>(steps) *
                                     static_cast<unsigned long long>(hi - lo + 1);
    if (cells > rc.budget().max_windows)
        throw BudgetExceeded("diagram of " + std::to_string(cells) + " cells exceeds the budget");

    const DiagramStyle style = format == "pgm" ? DiagramStyle::pgm : DiagramStyle::ascii;
    rc.emit(render_diagram(x, steps, lo, hi, R, style));
    return 0;
}

int cmd_language(const RunConfig& rc, int n_max) {
    rc.params().require_p_gt_q("language"); // the count formulas need p > q
    std::ostringstream csv;
    csv << "n,count,formula,wide_count,wide_formula,count_match,wide_match\n";
    bool all_match = true;
    if (n_max >= 1) {
        const Params pr = rc.params();
        const Rules R(pr);
        const LanguageTable table =
            LanguageTable::build(n_max + 1, R, FracDirection::p_over_q, rc.budget(), rc.threads);
        for (int n = 1; n <= n_max; ++n) {
            const LanguageLevel lvl = classify_level(table, n);
            const BigInt formula = complexity_closed_form(n, pr);
            const BigInt wide_formula = ipow(pr.q(), static_cast<unsigned>(n)) * (pr.q() - 1);
            const bool count_match = BigInt(table.count(n)) == formula;
            const bool wide_match = BigInt(lvl.wide.size()) == wide_formula &&
                                    construct_wide_words(n, R) == lvl.wide;
            all_match = all_match && count_match && wide_match;
            csv << n << ',' << table.count(n) << ',' << formula << ',' << lvl.wide.size() << ','
                << wide_formula << ',' << (count_match ? "MATCH" : "MISMATCH") << ','
                << (wide_match ? "MATCH" : "MISMATCH") << '\n';
        }
    }
    rc.emit(csv.str());
    return all_match ? 0 : 1;
}

int cmd_companion(const RunConfig& rc, const std::string& value, const std::string& range) {
    const Params pr = rc.params();
    const Rules R(pr);
    const Rational xi = parse_rational(value);
    if (xi <= 0) throw PreconditionError("companion: value must be positive");
    const auto [i_from, i_to] = parse_range(range);

    // trace digits for times [i_from, i_to + 1]
    const Configuration start = advance(encode(xi, pr), i_from, R);
    const DigitWord tr = trace_of(start, 0, static_cast<int>(i_to - i_from + 2), R);
    const CompanionWord from_trace = companion_from_word(tr, pr);
    const CompanionWord from_value = companion_window(xi, i_from, i_to, pr);

    std::ostringstream csv;
    csv << "i,trace_t,trace_t1,companion_from_trace,companion_from_value,match,"
           "compfrac_partial,compfrac_error,compfrac_bound,bound_ok\n";
    bool all_match = true;
    for (long long i = i_from; i <= i_to; ++i) {
        const std::size_t k = static_cast<std::size_t>(i - i_from);
        const bool match = from_trace[k] == from_value[k];
        all_match = all_match && match;
        csv << i << ',' << tr[k] << ',' << tr[k + 1] << ',' << from_trace[k] << ','
            << from_value[k] << ',' << (match ? "MATCH" : "MISMATCH") << ',';
        if (i >= 0) {
            const CompfracResult res = compfrac_reconstruct(xi, static_cast<int>(i), pr);
            csv << rational_to_string(res.partial_sum) << ',' << rational_to_string(res.error)
                << ',' << rational_to_string(res.bound) << ','
                << (res.within_bound ? "OK" : "EXCEEDED");
        } else {
            csv << ",,,";
        }
        csv << '\n';
    }
    rc.emit(csv.str());
    return all_match ? 0 : 1;
}

int cmd_sofic(const RunConfig& rc, const std::string& source, const std::string& path, int n_max,
              int sync_max_len) {
    LabeledGraph g;
    enum class Formula { zpq, trans32, none } formula = Formula::none;
    std::optional<Params> pr;
    if (source == "zpq") {
        pr = rc.params();
        g = build_Zpq(*pr);
        formula = Formula::zpq;
    } else if (source == "trans32") {
        g = build_transitive_32();
        formula = Formula::trans32;
    } else if (source == "file") {
        std::ifstream f(path);
        if (!f) throw ParseError("cannot open edge list '" + path + "'");
        g = parse_edge_list(f);
    } else {
        throw ParseError("unknown graph source '" + source + "' (zpq, trans32 or file)");
    }

    std::ostringstream csv;
    csv << "n,count,formula,match\n";
    bool all_match = true;
    for (int n = 1; n <= n_max; ++n) {
        const BigInt count = count_distinct_labels(g, n);
        csv << n << ',' << count << ',';
        if (formula == Formula::zpq) {
            const BigInt f = complexity_closed_form(n, *pr);
            all_match = all_match && count == f;
            csv << f << ',' << (count == f ? "MATCH" : "MISMATCH");
        } else if (formula == Formula::trans32) {
            const BigInt f = BigInt(4) * ipow(3, static_cast<unsigned>(n)) -
                             BigInt(3) * ipow(2, static_cast<unsigned>(n));
            all_match = all_match && count == f;
            csv << f << ',' << (count == f ? "MATCH" : "MISMATCH");
        } else {
            csv << ',';
        }
        csv << '\n';
    }
    if (sync_max_len > 0) {
        const auto word = find_synchronizing_word(g, sync_max_len);
        csv << "# synchronizing_word,";
        if (word) {
            for (std::size_t i = 0; i < word->size(); ++i) csv << (i ? " " : "") << (*word)[i];
        } else {
            csv << "none";
        }
        csv << '\n';
    }
    rc.emit(csv.str());
    return all_match ? 0 : 1;
}

int cmd_verify(const RunConfig& rc, const std::string& suite) {
    const Params pr = rc.params();
    const Rules R(pr);
    SuiteOptions opt;
    opt.seed = rc.seed;
    opt.threads = rc.threads;
    opt.budget = rc.budget();
    const std::vector<NamedCheck> checks =
        suite == "lemmas" ? run_lemma_suite(R, opt) : run_full_suite(R, opt);
    std::ostringstream out;
    bool ok = true;
    for (const NamedCheck& c : checks) {
        if (c.result.ok) {
            out << "PASS " << c.name << '\n';
        } else {
            ok = false;
            out << "FAIL " << c.name << ": " << c.result.detail << '\n';
        }
    }
    out << (ok ? "PASS" : "FAIL") << " (" << checks.size() << " checks)\n";
    rc.emit(out.str());
    return ok ? 0 : 1;
}

int cmd_mahler_search(const RunConfig& rc, long long max_num, int max_den_exp, int steps,
                      long long top) {
    const Params pr = rc.params();
    const std::vector<ColumnHit> hits =
        search_finite_columns(max_num, max_den_exp, steps, pr, rc.budget());
    std::ostringstream csv;
    csv << "numerator,den_exp,run_length,first_violation\n";
    long long emitted = 0;
    for (const ColumnHit& h : hits) {
        if (top > 0 && emitted >= top) break;
        csv << h.numerator << ',' << h.den_exp << ',' << h.run_length << ','
            << h.first_violation << '\n';
        ++emitted;
    }
    rc.emit(csv.str());
    return 0;
}

int cmd_constrained_prefix(const RunConfig& rc, int steps) {
    const Rules R(rc.params());
    const ConstrainedPrefix cp = build_constrained_prefix(steps, R);
    std::ostringstream csv;
    csv << "step,position,chosen_digit,trace_digit\n";
    for (int i = 1; i <= steps; ++i)
        csv << i << ',' << -i << ',' << cp.left_digits[static_cast<std::size_t>(i - 1)] << ','
            << cp.trace[static_cast<std::size_t>(i - 1)] << '\n';
    rc.emit(csv.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact workbench for base-pq fractional multiplication automata"};
    app.require_subcommand(1);

    RunConfig rc;
    std::function<int()> action;

    auto add_params = [&rc](CLI::App* cmd, bool required = true) {
        auto* p = cmd->add_option("--p", rc.p, "numerator parameter p (> 1)");
        auto* q = cmd->add_option("--q", rc.q, "denominator parameter q (> 1, coprime to p)");
        if (required) {
            p->required();
            q->required();
        }
    };
    auto add_common = [&rc](CLI::App* cmd) {
        cmd->add_option("--threads", rc.threads, "worker threads (default: hardware)");
        cmd->add_option("--budget", rc.budget_flag,
                        "work cap in windows/candidates (overrides TRACELAB_BUDGET)");
        cmd->add_option("--out", rc.out_path, "write output to a file instead of stdout");
    };

    // simulate
    {
        auto* cmd = app.add_subcommand("simulate", "render a space-time diagram");
        static std::string value, config_path, window, format = "ascii";
        static int steps = 30;
        add_params(cmd);
        add_common(cmd);
        cmd->add_option("--value", value, "initial value, an exact rational like 1 or 9/4");
        cmd->add_option("--config", config_path, "file with a configuration 'L|abc.def|R'");
        cmd->add_option("--steps", steps, "number of rows");
        cmd->add_option("--window", window, "column window 'lo..hi' (default: fit)");
        cmd->add_option("--format", format, "ascii or pgm")
            ->check(CLI::IsMember({"ascii", "pgm"}));
        cmd->callback([&] {
            action = [&] {
                return cmd_simulate(rc, value, config_path, steps, window, format);
            };
        });
    }

    // language
    {
        auto* cmd = app.add_subcommand("language", "enumerate trace language levels");
        static int n_max = 5;
        add_params(cmd);
        add_common(cmd);
        cmd->add_option("--n-max", n_max, "largest word length to enumerate");
        cmd->callback([&] {
            action = [&] { return cmd_language(rc, n_max); };
        });
    }

    // companion
    {
        auto* cmd = app.add_subcommand("companion", "companion digits from trace and from value");
        static std::string value = "1", range = "0..10";
        add_params(cmd);
        add_common(cmd);
        cmd->add_option("--value", value, "positive exact rational");
        cmd->add_option("--range", range, "index range 'lo..hi'");
        cmd->callback([&] {
            action = [&] { return cmd_companion(rc, value, range); };
        });
    }

    // sofic
    {
        auto* cmd = app.add_subcommand("sofic", "distinct label counts of a graph presentation");
        static std::string source = "zpq", path;
        static int n_max = 6, sync_max_len = 0;
        add_params(cmd, false);
        add_common(cmd);
        cmd->add_option("--graph", source, "graph source: zpq, trans32 or file");
        cmd->add_option("--path", path, "edge list file for --graph file");
        cmd->add_option("--n-max", n_max, "largest word length to count");
        cmd->add_option("--find-sync", sync_max_len,
                        "search for a synchronizing word up to this length");
        cmd->callback([&] {
            action = [&] { return cmd_sofic(rc, source, path, n_max, sync_max_len); };
        });
    }

    // verify
    {
        auto* cmd = app.add_subcommand("verify", "run the verification suites");
        static std::string suite = "all";
        add_params(cmd);
        add_common(cmd);
        cmd->add_option("--suite", suite, "lemmas or all")
            ->check(CLI::IsMember({"lemmas", "all"}));
        cmd->add_option("--seed", rc.seed, "seed for randomized checks");
        cmd->callback([&] {
            action = [&] { return cmd_verify(rc, suite); };
        });
    }

    // mahler-search
    {
        auto* cmd = app.add_subcommand(
            "mahler-search", "rank grid values by how long one diagram column stays below p");
        static long long max_num = 1000, top = 0;
        static int max_den_exp = 2, steps = 30;
        add_params(cmd);
        add_common(cmd);
        cmd->add_option("--max-num", max_num, "largest numerator in the grid");
        cmd->add_option("--max-den-exp", max_den_exp, "largest k for denominators base^k");
        cmd->add_option("--steps", steps, "steps to follow each candidate");
        cmd->add_option("--top", top, "emit only the best N candidates (0 = all)");
        cmd->callback([&] {
            action = [&] { return cmd_mahler_search(rc, max_num, max_den_exp, steps, top); };
        });
    }

    // constrained-prefix
    {
        auto* cmd = app.add_subcommand(
            "constrained-prefix", "grow a configuration whose trace column stays below p");
        static int steps = 50;
        add_params(cmd);
        add_common(cmd);
        cmd->add_option("--steps", steps, "number of digits to choose");
        cmd->callback([&] {
            action = [&] { return cmd_constrained_prefix(rc, steps); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return action();
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget: " << e.what() << '\n';
        return 3;
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failure: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
