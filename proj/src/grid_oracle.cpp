#include "maxent/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "block_solver.hpp"
#include "maxent/bounds.hpp"
#include "maxent/errors.hpp"

namespace maxent {

namespace {

constexpr double kBoundSlack = 1e-9;
constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 24;

using Counts = std::vector<std::uint64_t>;

// All compositions of K into r + 1 non-negative parts, in lexicographic order.
class GridPoints {
public:
    GridPoints(std::size_t r, std::size_t resolution) : width_(r + 1) {
        std::vector<std::uint32_t> current(width_, 0);
        build(current, 0, static_cast<std::uint32_t>(resolution));
    }

    std::size_t size() const noexcept { return flat_.size() / width_; }
    std::size_t width() const noexcept { return width_; }
    std::span<const std::uint32_t> at(std::size_t i) const noexcept {
        return {flat_.data() + i * width_, width_};
    }

    std::size_t index_of(std::span<const std::uint32_t> point) const {
        std::size_t lo = 0;
        std::size_t hi = size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            const auto p = at(mid);
            if (std::lexicographical_compare(p.begin(), p.end(), point.begin(), point.end())) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return lo;
    }

private:
    void build(std::vector<std::uint32_t>& current, std::size_t part, std::uint32_t remaining) {
        if (part + 1 == width_) {
            current[part] = remaining;
            flat_.insert(flat_.end(), current.begin(), current.end());
            return;
        }
        for (std::uint32_t v = 0; v <= remaining; ++v) {
            current[part] = v;
            build(current, part + 1, remaining - v);
        }
    }

    std::size_t width_;
    std::vector<std::uint32_t> flat_;
};

// Entropy of an integer count vector with known total, via a lookup table
// when the total is small enough.
class CountEntropy {
public:
    explicit CountEntropy(std::uint64_t total) : total_(static_cast<double>(total)) {
        if (total <= kTableLimit) {
            table_.resize(total + 1, 0.0);
            for (std::uint64_t c = 1; c <= total; ++c) {
                const double p = static_cast<double>(c) / total_;
                table_[c] = -p * std::log2(p);
            }
        }
    }

    double operator()(std::span<const std::uint64_t> counts) const noexcept {
        double h = 0.0;
        if (!table_.empty()) {
            for (auto c : counts) h += table_[c];
            return h;
        }
        for (auto c : counts) {
            if (c == 0) continue;
            const double p = static_cast<double>(c) / total_;
            h -= p * std::log2(p);
        }
        return h;
    }

private:
    double total_;
    std::vector<double> table_;
};

void convolve_counts(std::span<const std::uint64_t> a, std::span<const std::uint32_t> b,
                     Counts& out) {
    out.assign(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
}

struct Candidate {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> tuple;

    // Higher value wins; equal values go to the lexicographically smaller tuple.
    bool improves_on(const Candidate& other) const noexcept {
        if (value != other.value) return value > other.value;
        return std::lexicographical_compare(tuple.begin(), tuple.end(), other.tuple.begin(),
                                            other.tuple.end());
    }
};

std::uint64_t checked_power(std::uint64_t base, std::size_t exponent) {
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (result > std::numeric_limits<std::uint64_t>::max() / 4 / base) {
            throw ResourceError("grid_oracle: K^n overflows 64-bit counts");
        }
        result *= base;
    }
    return result;
}

class GridSearch {
public:
    GridSearch(std::size_t n, std::size_t r, std::size_t resolution)
        : n_(n), r_(r), resolution_(resolution), points_(r, resolution),
          entropy_(checked_power(resolution, n)) {}

    const GridPoints& points() const noexcept { return points_; }

    // Depth-first walk over non-decreasing tuples sharing tuple[0..depth).
    void walk(std::vector<std::size_t>& tuple, std::vector<Counts>& prefix, std::size_t depth,
              Candidate& best, std::uint64_t& evaluated) const {
        const std::size_t from = depth == 0 ? 0 : tuple[depth - 1];
        for (std::size_t i = from; i < points_.size(); ++i) {
            tuple[depth] = i;
            convolve_counts(prefix[depth], points_.at(i), prefix[depth + 1]);
            if (depth + 1 == n_) {
                ++evaluated;
                const double v = entropy_(prefix[depth + 1]);
                if (v > best.value) {
                    best.value = v;
                    best.tuple = tuple;
                }
            } else {
                walk(tuple, prefix, depth + 1, best, evaluated);
            }
        }
    }

    // Best tuple whose leading entries are fixed to `head`.
    Candidate search_from(const std::vector<std::size_t>& head, std::uint64_t& evaluated) const {
        std::vector<std::size_t> tuple(n_, 0);
        std::vector<Counts> prefix(n_ + 1);
        prefix[0] = {1};
        for (std::size_t d = 0; d < head.size(); ++d) {
            tuple[d] = head[d];
            convolve_counts(prefix[d], points_.at(head[d]), prefix[d + 1]);
        }
        Candidate best;
        if (head.size() == n_) {
            ++evaluated;
            best.value = entropy_(prefix[n_]);
            best.tuple = tuple;
            return best;
        }
        walk(tuple, prefix, head.size(), best, evaluated);
        return best;
    }

    double evaluate(const std::vector<std::size_t>& tuple) const {
        Counts acc{1};
        Counts next;
        for (auto i : tuple) {
            convolve_counts(acc, points_.at(i), next);
            acc.swap(next);
        }
        return entropy_(acc);
    }

    std::vector<Pmf> to_pmfs(const std::vector<std::size_t>& tuple) const {
        std::vector<Pmf> out;
        for (auto i : tuple) {
            std::vector<double> probs(r_ + 1);
            const auto p = points_.at(i);
            for (std::size_t a = 0; a <= r_; ++a) {
                probs[a] = static_cast<double>(p[a]) / static_cast<double>(resolution_);
            }
            out.emplace_back(std::move(probs));
        }
        return out;
    }

    // Nearest grid point by largest-remainder rounding.
    std::size_t round_to_grid(const Pmf& p) const {
        std::vector<std::uint32_t> counts(r_ + 1);
        std::vector<std::pair<double, std::size_t>> remainders;
        std::uint32_t used = 0;
        for (std::size_t a = 0; a <= r_; ++a) {
            const double scaled = p[a] * static_cast<double>(resolution_);
            counts[a] = static_cast<std::uint32_t>(std::floor(scaled));
            used += counts[a];
            remainders.emplace_back(scaled - std::floor(scaled), a);
        }
        std::stable_sort(remainders.begin(), remainders.end(),
                         [](const auto& x, const auto& y) { return x.first > y.first; });
        for (std::size_t k = 0; used < resolution_; ++k, ++used) {
            ++counts[remainders[k % remainders.size()].second];
        }
        return points_.index_of(counts);
    }

    std::size_t n() const noexcept { return n_; }

private:
    std::size_t n_;
    std::size_t r_;
    std::size_t resolution_;
    GridPoints points_;
    CountEntropy entropy_;
};

// All non-decreasing tuples of length k, grouped by their first entry.
void collect_prefixes(std::size_t points, std::size_t k, std::size_t first,
                      std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> tuple(k, first);
    if (k == 0) {
        out.push_back({});
        return;
    }
    for (;;) {
        out.push_back(tuple);
        std::size_t d = k;
        while (d > 1 && tuple[d - 1] + 1 >= points) --d;
        if (d == 1) return;
        const std::size_t v = tuple[d - 1] + 1;
        for (std::size_t e = d - 1; e < k; ++e) tuple[e] = v;
    }
}

GridOracleResult run_exhaustive(const GridSearch& search, const GridOracleOptions& options) {
    const std::size_t count = search.points().size();
    std::vector<Candidate> per_head(count);
    std::vector<std::uint64_t> evaluated(count, 0);
    for_each_index(options.execution, count, [&](std::size_t head) {
        per_head[head] = search.search_from({head}, evaluated[head]);
    });
    GridOracleResult result;
    Candidate best;
    for (std::size_t head = 0; head < count; ++head) {
        if (per_head[head].value > best.value) best = per_head[head];
        result.tuples_evaluated += evaluated[head];
    }
    result.value = best.value;
    result.argmax = search.to_pmfs(best.tuple);
    result.method = GridMethod::exhaustive;
    return result;
}

GridOracleResult run_branch_and_bound(const GridSearch& search, std::size_t r,
                                      std::size_t resolution, const GridOracleOptions& options) {
    const std::size_t n = search.n();
    const std::size_t count = search.points().size();
    const double scale = std::pow(static_cast<double>(resolution), -static_cast<double>(n - 1));

    GridOracleResult result;
    result.method = GridMethod::branch_and_bound;

    // Incumbent: the conjectured maximizer rounded onto the grid.
    Candidate incumbent;
    {
        const auto inputs = conjectured_inputs(n, r);
        for (const auto& p : inputs) incumbent.tuple.push_back(search.round_to_grid(p));
        std::sort(incumbent.tuple.begin(), incumbent.tuple.end());
        incumbent.value = search.evaluate(incumbent.tuple);
        ++result.tuples_evaluated;
    }

    struct Survivor {
        std::vector<std::size_t> prefix;
        double bound = 0.0;
    };
    std::vector<std::vector<Survivor>> survivors_by_head(count);
    std::vector<std::uint64_t> pruned_by_head(count, 0);
    const double threshold = incumbent.value;

    for_each_index(options.execution, count, [&](std::size_t head) {
        std::vector<std::vector<std::size_t>> prefixes;
        collect_prefixes(count, n - 1, head, prefixes);
        detail::BlockSolveParams params;
        params.tolerance = 1e-6;
        params.max_iterations = 500;
        params.stop_below = threshold - kBoundSlack;
        for (auto& prefix : prefixes) {
            std::vector<double> other{1.0};
            for (auto i : prefix) {
                const auto pt = search.points().at(i);
                std::vector<double> block(pt.begin(), pt.end());
                other = convolve_raw(other, block);
            }
            for (auto& v : other) v *= scale;
            std::vector<double> last(r + 1, 1.0 / static_cast<double>(r + 1));
            const auto solved = detail::solve_block(other, last, {}, params);
            const double bound = solved.value + solved.fw_gap + kBoundSlack;
            if (solved.pruned || bound < threshold) {
                ++pruned_by_head[head];
            } else {
                survivors_by_head[head].push_back({std::move(prefix), bound});
            }
        }
    });

    std::vector<Survivor> survivors;
    for (std::size_t head = 0; head < count; ++head) {
        result.prefixes_pruned += pruned_by_head[head];
        for (auto& s : survivors_by_head[head]) survivors.push_back(std::move(s));
    }
    std::stable_sort(survivors.begin(), survivors.end(),
                     [](const Survivor& a, const Survivor& b) { return a.bound > b.bound; });

    for (const auto& s : survivors) {
        if (s.bound < incumbent.value) {
            ++result.prefixes_pruned;
            continue;
        }
        const auto found = search.search_from(s.prefix, result.tuples_evaluated);
        if (found.improves_on(incumbent)) incumbent = found;
    }
    result.value = incumbent.value;
    result.argmax = search.to_pmfs(incumbent.tuple);
    return result;
}

}  // namespace

std::string_view to_string(GridMethod method) noexcept {
    switch (method) {
        case GridMethod::automatic: return "automatic";
        case GridMethod::exhaustive: return "exhaustive";
        case GridMethod::branch_and_bound: return "branch_and_bound";
    }
    return "automatic";
}

std::uint64_t multiset_count(std::uint64_t points, std::size_t k) noexcept {
    // C(points + i - 1, i) = C(points + i - 2, i - 1) * (points + i - 1) / i.
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (points == 0) return k == 0 ? 1 : 0;
    __extension__ using Wide = unsigned __int128;
    Wide c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (Wide{points} + i - 1) / i;
        if (c > kMax) return kMax;
    }
    return static_cast<std::uint64_t>(c);
}

GridOracleResult grid_oracle_search(std::size_t n, std::size_t r, std::size_t resolution,
                                    const GridOracleOptions& options) {
    if (n < 1 || r < 1 || resolution < 1) {
        throw DomainError("grid_oracle: need n, r, K >= 1");
    }
    const std::uint64_t per_input = multiset_count(r + 1, resolution);
    const std::uint64_t tuples = multiset_count(per_input, n);
    const std::uint64_t prefixes = multiset_count(per_input, n - 1);

    GridMethod method = options.method;
    if (method == GridMethod::automatic) {
        method = (tuples <= options.budget || n == 1) ? GridMethod::exhaustive
                                                      : GridMethod::branch_and_bound;
    }
    if (method == GridMethod::exhaustive && tuples > options.budget) {
        throw ResourceError("grid_oracle: " + std::to_string(tuples) +
                            " tuples exceed the enumeration budget of " +
                            std::to_string(options.budget));
    }
    if (method == GridMethod::branch_and_bound) {
        if (n < 2) throw DomainError("grid_oracle: branch and bound needs n >= 2");
        if (prefixes > options.budget) {
            throw ResourceError("grid_oracle: " + std::to_string(prefixes) +
                                " prefixes exceed the enumeration budget of " +
                                std::to_string(options.budget));
        }
    }

    const GridSearch search(n, r, resolution);
    auto result = method == GridMethod::exhaustive
                      ? run_exhaustive(search, options)
                      : run_branch_and_bound(search, r, resolution, options);
    result.points_per_input = search.points().size();
    return result;
}

}  // namespace maxent
