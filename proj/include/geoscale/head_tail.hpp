#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "geoscale/errors.hpp"
#include "geoscale/series.hpp"

namespace geoscale {

/// One attempted mean split: the mean of the values entering the level and
/// how they divided into head (strictly above the mean) and tail.
struct HeadTailLevel {
    double mean = 0.0;
    std::size_t head_count = 0;
    std::size_t tail_count = 0;
    double head_fraction = 0.0;
};

/// Nested head/tail classification. `levels[k]` describes the k-th split;
/// `class_assignment[i]` is the 0-based level index value i ended up in.
/// ht_index == levels.size() == number of accepted splits + 1.
struct HeadTailPartition {
    std::vector<HeadTailLevel> levels;
    std::vector<std::size_t> class_assignment;
    std::size_t ht_index = 0;
};

/// Recursive mean splitting: head = values strictly greater than the mean
/// of the current group. The split is accepted (and recursion continues on
/// the head) while the head is non-empty and its fraction stays within
/// head_limit; a rejected split leaves the whole group in the final level.
/// Values equal to the mean always fall to the tail.
inline HeadTailPartition head_tail_breaks(const ValueSeries& s, double head_limit = 0.4) {
    validate_series(s);
    if (!(head_limit > 0.0 && head_limit < 1.0))
        throw std::invalid_argument("head_limit must lie in (0, 1)");

    HeadTailPartition part;
    part.class_assignment.assign(s.values.size(), 0);

    std::vector<std::size_t> current(s.values.size());
    std::iota(current.begin(), current.end(), std::size_t{0});

    while (!current.empty()) {
        double sum = 0.0;
        for (std::size_t i : current) sum += s.values[i];
        const double mean = sum / static_cast<double>(current.size());

        std::vector<std::size_t> head;
        for (std::size_t i : current)
            if (s.values[i] > mean) head.push_back(i);

        HeadTailLevel level;
        level.mean = mean;
        level.head_count = head.size();
        level.tail_count = current.size() - head.size();
        level.head_fraction = static_cast<double>(head.size()) / static_cast<double>(current.size());
        const std::size_t level_index = part.levels.size();
        part.levels.push_back(level);

        if (head.empty() || level.head_fraction > head_limit) {
            // Terminal level: the over-limit split is rejected, everything
            // entering this level stays here.
            for (std::size_t i : current) part.class_assignment[i] = level_index;
            break;
        }
        for (std::size_t i : current)
            if (!(s.values[i] > mean)) part.class_assignment[i] = level_index;
        current = std::move(head);
    }

    part.ht_index = part.levels.size();
    return part;
}

/// Number of head/tail levels; the series shows scaling ("far more small
/// values than large ones") when this reaches 3.
inline std::size_t ht_index(const ValueSeries& s, double head_limit = 0.4) {
    return head_tail_breaks(s, head_limit).ht_index;
}

constexpr std::size_t kScalingHtIndexThreshold = 3;

inline nlohmann::json to_json(const HeadTailPartition& part) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& lv : part.levels)
        levels.push_back({{"mean", lv.mean},
                          {"head_count", lv.head_count},
                          {"tail_count", lv.tail_count},
                          {"head_fraction", lv.head_fraction}});
    return {{"ht_index", part.ht_index},
            {"levels", levels},
            {"class_assignment", part.class_assignment}};
}

} // namespace geoscale
