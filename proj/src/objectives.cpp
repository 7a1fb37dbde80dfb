#include "evopipe/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evopipe/errors.hpp"

namespace evopipe {

double ObjectiveVector::component(int i) const {
    switch (i) {
        case 0: return q;
        case 1: return s;
        case 2:
            if (p.has_value()) return *p;
            break;
        default: break;
    }
    throw ArityMismatchError("objective component " + std::to_string(i) + " out of range");
}

std::vector<double> ObjectiveVector::components() const {
    std::vector<double> out{q, s};
    if (p.has_value()) out.push_back(*p);
    return out;
}

double penalty_fitness(const ObjectiveVector& v, const PenaltyWeights& w) {
    double f = v.q + w.w1 * v.s;
    if (w.w2 != 0.0) {
        if (!v.p.has_value()) throw ArityMismatchError("penalty_fitness: time term requested but p is absent");
        f += w.w2 * *v.p;
    }
    return f;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.arity() != b.arity()) {
        throw ArityMismatchError("dominates: arity " + std::to_string(a.arity()) + " vs " +
                                 std::to_string(b.arity()));
    }
    bool strictly_better = false;
    for (int i = 0; i < a.arity(); ++i) {
        const double av = a.component(i);
        const double bv = b.component(i);
        if (av > bv) return false;
        if (av < bv) strictly_better = true;
    }
    return strictly_better;
}

double ParetoArchive::best_component(int i) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Individual& e : entries) best = std::min(best, e.objectives.component(i));
    return best;
}

bool pareto_update(ParetoArchive& archive, const std::vector<Individual>& candidates) {
    std::vector<Individual> pool = archive.entries;
    pool.insert(pool.end(), candidates.begin(), candidates.end());

    std::vector<Individual> front;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pool.size(); ++j) {
            if (i != j && dominates(pool[j].objectives, pool[i].objectives)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) front.push_back(pool[i]);
    }

    // Canonical order + dedup of equal objective vectors keyed by genotype
    // serialization; keeps updates idempotent and permutation-insensitive.
    std::vector<std::pair<std::string, std::size_t>> keyed(front.size());
    for (std::size_t i = 0; i < front.size(); ++i) keyed[i] = {serialize(front[i].graph), i};
    std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        const auto ka = front[a.second].objectives.components();
        const auto kb = front[b.second].objectives.components();
        if (ka != kb) return ka < kb;
        return a.first < b.first;
    });

    std::vector<Individual> result;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        const Individual& candidate = front[keyed[i].second];
        if (!result.empty() && result.back().objectives == candidate.objectives) continue;
        result.push_back(candidate);
    }

    bool changed = result.size() != archive.entries.size();
    if (!changed) {
        for (std::size_t i = 0; i < result.size(); ++i) {
            if (!(result[i].objectives == archive.entries[i].objectives) ||
                !(result[i].graph == archive.entries[i].graph)) {
                changed = true;
                break;
            }
        }
    }
    archive.entries = std::move(result);
    return changed;
}

namespace {

// 2-D staircase sweep; points must already lie strictly below ref.
double hv2(std::vector<std::pair<double, double>> pts, double ref_x, double ref_y) {
    std::sort(pts.begin(), pts.end());
    double volume = 0.0;
    double prev_y = ref_y;
    for (const auto& [x, y] : pts) {
        if (y >= prev_y) continue;  // dominated in the sweep
        volume += (ref_x - x) * (prev_y - y);
        prev_y = y;
    }
    return volume;
}

}  // namespace

double hypervolume(const std::vector<ObjectiveVector>& front, const ObjectiveVector& ref) {
    if (front.empty()) return 0.0;
    const int arity = ref.arity();
    for (std::size_t i = 0; i < front.size(); ++i) {
        if (front[i].arity() != arity) {
            throw ArityMismatchError("hypervolume: point arity differs from reference");
        }
        for (int c = 0; c < arity; ++c) {
            if (!(front[i].component(c) < ref.component(c))) {
                throw PointBeyondReferenceError("hypervolume: point " + std::to_string(i) + " component " +
                                                std::to_string(c) + " is not below the reference");
            }
        }
    }

    if (arity == 2) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(front.size());
        for (const auto& v : front) pts.emplace_back(v.q, v.s);
        return hv2(std::move(pts), ref.q, ref.s);
    }

    // 3-D: slice along the third component. Points sorted by p; the slab
    // between consecutive levels is covered by the 2-D projection of all
    // points at or below the slab floor.
    std::vector<ObjectiveVector> sorted = front;
    std::sort(sorted.begin(), sorted.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
        return *a.p < *b.p;
    });
    double volume = 0.0;
    std::vector<std::pair<double, double>> active;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        active.emplace_back(sorted[i].q, sorted[i].s);
        const double z_lo = *sorted[i].p;
        const double z_hi = (i + 1 < sorted.size()) ? *sorted[i + 1].p : *ref.p;
        if (z_hi > z_lo) {
            volume += hv2(active, ref.q, ref.s) * (z_hi - z_lo);
        }
    }
    return volume;
}

void ObjectiveBounds::expand(const ObjectiveVector& v) {
    const std::vector<double> c = v.components();
    if (mins.empty()) {
        mins = c;
        maxs = c;
        return;
    }
    if (c.size() != mins.size()) throw ArityMismatchError("ObjectiveBounds: inconsistent arity");
    for (std::size_t i = 0; i < c.size(); ++i) {
        mins[i] = std::min(mins[i], c[i]);
        maxs[i] = std::max(maxs[i], c[i]);
    }
}

double normalized_hypervolume(const std::vector<ObjectiveVector>& front, const ObjectiveBounds& bounds) {
    if (front.empty() || !bounds.valid()) return 0.0;
    const auto norm = [&](double v, std::size_t i) {
        const double span = bounds.maxs[i] - bounds.mins[i];
        if (span <= 0.0) return 0.0;
        return (v - bounds.mins[i]) / span;
    };
    std::vector<ObjectiveVector> scaled;
    scaled.reserve(front.size());
    ObjectiveVector ref;
    ref.q = 1.01;
    ref.s = 1.01;
    const bool has_p = front.front().p.has_value();
    if (has_p) ref.p = 1.01;
    for (const auto& v : front) {
        ObjectiveVector w;
        w.q = norm(v.q, 0);
        w.s = norm(v.s, 1);
        if (has_p) w.p = norm(*v.p, 2);
        scaled.push_back(w);
    }
    return hypervolume(scaled, ref);
}

}  // namespace evopipe
