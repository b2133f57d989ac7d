#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "stg/category.hpp"
#include "stg/notation.hpp"

namespace stg {

/// Weights over transitions, keyed and iterated by canonical notation.
/// Used both for raw (integer-valued) counts and for normalized
/// probability distributions.
class TransitionTable {
public:
    struct Entry {
        Transition transition;
        double weight = 0.0;
    };
    using Map = std::map<std::string, Entry>;

    void add(const Transition& t, double w) {
        auto key = format(t);
        auto it = entries_.find(key);
        if (it == entries_.end())
            entries_.emplace(std::move(key), Entry{t, w});
        else
            it->second.weight += w;
    }

    void merge(const TransitionTable& other, double scale = 1.0) {
        for (const auto& [key, e] : other.entries_) {
            auto it = entries_.find(key);
            if (it == entries_.end())
                entries_.emplace(key, Entry{e.transition, e.weight * scale});
            else
                it->second.weight += e.weight * scale;
        }
    }

    double weight(const Transition& t) const {
        auto it = entries_.find(format(t));
        return it == entries_.end() ? 0.0 : it->second.weight;
    }

    double total() const {
        double s = 0.0;
        for (const auto& [_, e] : entries_) s += e.weight;
        return s;
    }

    /// Divides every weight by the total; an empty table stays empty.
    TransitionTable normalized() const {
        TransitionTable out;
        const double z = total();
        if (z <= 0.0) return out;
        for (const auto& [key, e] : entries_) out.entries_.emplace(key, Entry{e.transition, e.weight / z});
        return out;
    }

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const Map& entries() const { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    bool operator==(const TransitionTable& o) const {
        if (entries_.size() != o.entries_.size()) return false;
        for (auto a = entries_.begin(), b = o.entries_.begin(); a != entries_.end(); ++a, ++b)
            if (a->first != b->first || a->second.weight != b->second.weight) return false;
        return true;
    }

private:
    Map entries_;
};

using CountTable = TransitionTable;
using Distribution = TransitionTable;

/// Jensen-Shannon divergence (base 2, so within [0, 1]) between two
/// normalized distributions.
inline double jensen_shannon(const Distribution& p, const Distribution& q) {
    std::map<std::string, std::pair<double, double>> joint;
    for (const auto& [k, e] : p) joint[k].first = e.weight;
    for (const auto& [k, e] : q) joint[k].second = e.weight;
    double js = 0.0;
    for (const auto& [_, pq] : joint) {
        const double m = 0.5 * (pq.first + pq.second);
        if (pq.first > 0) js += 0.5 * pq.first * std::log2(pq.first / m);
        if (pq.second > 0) js += 0.5 * pq.second * std::log2(pq.second / m);
    }
    return js < 0.0 ? 0.0 : js;
}

}  // namespace stg
