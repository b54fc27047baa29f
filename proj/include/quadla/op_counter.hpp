#pragma once

#include <cstdint>
#include <ostream>
#include <string>

namespace quadla {

/// Tally of base-scalar work. Multiplications and divisions (scalar
/// inversions) are what the cost recurrences count; additions and t-power
/// scalings are kept apart so they never leak into those totals.
struct OpCounter {
    std::string label;
    std::uint64_t mul_count = 0;
    std::uint64_t div_count = 0;
    std::uint64_t add_count = 0;
    std::uint64_t scaling_count = 0;

    OpCounter() = default;
    explicit OpCounter(std::string l) : label(std::move(l)) {}

    std::uint64_t mul_div() const noexcept { return mul_count + div_count; }

    OpCounter& operator+=(const OpCounter& o) noexcept {
        mul_count += o.mul_count;
        div_count += o.div_count;
        add_count += o.add_count;
        scaling_count += o.scaling_count;
        return *this;
    }
    friend OpCounter operator+(OpCounter a, const OpCounter& b) noexcept { return a += b; }
    /// Compares tallies only; labels are informational.
    friend bool operator==(const OpCounter& a, const OpCounter& b) noexcept {
        return a.mul_count == b.mul_count && a.div_count == b.div_count && a.add_count == b.add_count &&
               a.scaling_count == b.scaling_count;
    }

    friend std::ostream& operator<<(std::ostream& os, const OpCounter& c) {
        if (!c.label.empty()) os << c.label << ": ";
        return os << "mul=" << c.mul_count << " div=" << c.div_count << " add=" << c.add_count
                  << " scaling=" << c.scaling_count << " mul+div=" << c.mul_div();
    }
};

enum class MulStrategy { naive, strassen };

} // namespace quadla
