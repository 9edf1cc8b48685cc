#ifndef TRACELAB_CONFIGURATION_HPP
#define TRACELAB_CONFIGURATION_HPP

#include <string>
#include <utility>
#include <vector>

#include "tracelab/params.hpp"

namespace tracelab {

// A bi-infinite digit sequence with eventually-constant tails:
//
//   ... L L L  core[0] ... core[k-1]  R R R ...
//                ^ position `offset`
//
// Position increases rightward toward less significant digits: position i
// holds the coefficient of base^(-i), so position 0 is the units digit and
// position 1 the first fractional digit.
//
// Canonical form: the core neither begins with the left tail digit nor ends
// with the right tail digit.  An empty core is a constant configuration
// (offset normalized to 0) or, with distinct tails, a step at `offset`.
class Configuration {
public:
    Configuration() = default; // all-zero

    Configuration(Digit left_tail, DigitWord core, Digit right_tail, long long offset)
        : left_(left_tail), right_(right_tail), core_(std::move(core)), offset_(offset) {
        canonicalize();
    }

    static Configuration constant(Digit d) { return Configuration(d, {}, d, 0); }

    Digit at(long long pos) const {
        if (pos < offset_) return left_;
        if (pos >= core_end()) return right_;
        return core_[static_cast<std::size_t>(pos - offset_)];
    }

    Digit left_tail() const { return left_; }
    Digit right_tail() const { return right_; }
    const DigitWord& core() const { return core_; }
    long long offset() const { return offset_; }
    long long core_end() const { return offset_ + static_cast<long long>(core_.size()); }

    bool finite() const { return left_ == 0 && right_ == 0; }
    bool is_zero() const { return finite() && core_.empty(); }
    bool is_constant() const { return core_.empty() && left_ == right_; }

    // canonical form makes structural equality the right notion
    bool operator==(const Configuration&) const = default;

    // Window of digits for positions [lo, hi] inclusive.
    DigitWord window(long long lo, long long hi) const {
        DigitWord w;
        w.reserve(static_cast<std::size_t>(hi >= lo ? hi - lo + 1 : 0));
        for (long long i = lo; i <= hi; ++i) w.push_back(at(i));
        return w;
    }

    void validate_digits(const Params& pr) const {
        auto bad = [&](Digit d) { return d < 0 || d >= pr.base(); };
        if (bad(left_) || bad(right_))
            throw PreconditionError("configuration: tail digit out of range");
        for (Digit d : core_)
            if (bad(d)) throw PreconditionError("configuration: core digit out of range");
    }

    // Text form "L|abc.def|R": tails around a core whose dot separates
    // positions <= 0 from positions >= 1.
    std::string to_text() const {
        const long long lo = std::min<long long>(offset_, 1);
        const long long hi = std::max<long long>(core_end() - 1, 0);
        std::string s;
        s.push_back(digit_to_char(left_));
        s.push_back('|');
        for (long long i = lo; i <= 0; ++i) s.push_back(digit_to_char(at(i)));
        s.push_back('.');
        for (long long i = 1; i <= hi; ++i) s.push_back(digit_to_char(at(i)));
        s.push_back('|');
        s.push_back(digit_to_char(right_));
        return s;
    }

    static Configuration from_text(const std::string& text, const Params& pr) {
        const auto bar1 = text.find('|');
        const auto bar2 = text.rfind('|');
        if (bar1 == std::string::npos || bar2 == bar1)
            throw ParseError("configuration: expected 'L|core.core|R', got '" + text + "'");
        const std::string left = text.substr(0, bar1);
        const std::string mid = text.substr(bar1 + 1, bar2 - bar1 - 1);
        const std::string right = text.substr(bar2 + 1);
        if (left.size() != 1 || right.size() != 1)
            throw ParseError("configuration: tails must be single digits");
        const auto dot = mid.find('.');
        if (dot == std::string::npos || mid.find('.', dot + 1) != std::string::npos)
            throw ParseError("configuration: core needs exactly one '.'");
        DigitWord core;
        for (std::size_t i = 0; i < mid.size(); ++i)
            if (i != dot) core.push_back(char_to_digit(mid[i]));
        const long long offset = 1 - static_cast<long long>(dot);
        Configuration c(char_to_digit(left[0]), std::move(core), char_to_digit(right[0]), offset);
        c.validate_digits(pr);
        return c;
    }

private:
    void canonicalize() {
        std::size_t begin = 0;
        std::size_t end = core_.size();
        while (begin < end && core_[begin] == left_) {
            ++begin;
            ++offset_;
        }
        while (end > begin && core_[end - 1] == right_) --end;
        if (begin > 0 || end < core_.size())
            core_ = DigitWord(core_.begin() + static_cast<long>(begin),
                              core_.begin() + static_cast<long>(end));
        if (core_.empty() && left_ == right_) offset_ = 0;
    }

    Digit left_ = 0;
    Digit right_ = 0;
    DigitWord core_;
    long long offset_ = 0;
};

} // namespace tracelab

#endif
