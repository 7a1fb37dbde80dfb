#include "evopipe/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "evopipe/errors.hpp"

namespace evopipe {

namespace {

// Tie-break used everywhere: objective components lexicographically, then
// insertion index. Keeps both selectors fully deterministic.
bool stable_less(std::span<const ObjectiveVector> objectives, std::size_t a, std::size_t b) {
    const auto ka = objectives[a].components();
    const auto kb = objectives[b].components();
    if (ka != kb) return ka < kb;
    return a < b;
}

double sq_distance(const ObjectiveVector& a, const ObjectiveVector& b) {
    double acc = 0.0;
    for (int i = 0; i < a.arity(); ++i) {
        const double d = a.component(i) - b.component(i);
        acc += d * d;
    }
    return acc;
}

}  // namespace

std::vector<std::size_t> tournament_select_indices(std::span<const double> fitness, std::size_t k,
                                                   std::size_t tour_size, Rng& rng) {
    if (fitness.empty()) throw Error("tournament_select: empty population");
    std::vector<std::size_t> winners;
    winners.reserve(k);
    for (std::size_t draw = 0; draw < k; ++draw) {
        std::size_t best = rng.index(fitness.size());
        for (std::size_t t = 1; t < tour_size; ++t) {
            const std::size_t challenger = rng.index(fitness.size());
            if (fitness[challenger] < fitness[best] ||
                (fitness[challenger] == fitness[best] && challenger < best)) {
                best = challenger;
            }
        }
        winners.push_back(best);
    }
    return winners;
}

std::vector<std::size_t> nsga2_select_indices(std::span<const ObjectiveVector> objectives, std::size_t k) {
    const std::size_t n = objectives.size();
    if (n == 0) throw Error("nsga2_select: empty population");
    if (k >= n) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }

    // Fast non-dominated sorting.
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<int> domination_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(objectives[i], objectives[j])) {
                dominated_by[i].push_back(j);
            } else if (dominates(objectives[j], objectives[i])) {
                ++domination_count[i];
            }
        }
    }
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            for (std::size_t j : dominated_by[i]) {
                if (--domination_count[j] == 0) next.push_back(j);
            }
        }
        current = std::move(next);
    }

    std::vector<std::size_t> selected;
    for (const auto& front : fronts) {
        if (selected.size() + front.size() <= k) {
            selected.insert(selected.end(), front.begin(), front.end());
            if (selected.size() == k) break;
            continue;
        }

        // Partial front: rank by crowding distance, boundaries kept first.
        const int arity = objectives[front[0]].arity();
        std::vector<double> crowding(front.size(), 0.0);
        for (int obj = 0; obj < arity; ++obj) {
            std::vector<std::size_t> order(front.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double va = objectives[front[a]].component(obj);
                const double vb = objectives[front[b]].component(obj);
                if (va != vb) return va < vb;
                return front[a] < front[b];
            });
            const double lo = objectives[front[order.front()]].component(obj);
            const double hi = objectives[front[order.back()]].component(obj);
            crowding[order.front()] = std::numeric_limits<double>::infinity();
            crowding[order.back()] = std::numeric_limits<double>::infinity();
            if (hi <= lo) continue;
            for (std::size_t pos = 1; pos + 1 < order.size(); ++pos) {
                crowding[order[pos]] += (objectives[front[order[pos + 1]]].component(obj) -
                                         objectives[front[order[pos - 1]]].component(obj)) /
                                        (hi - lo);
            }
        }
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (crowding[a] != crowding[b]) return crowding[a] > crowding[b];
            return stable_less(objectives, front[a], front[b]);
        });
        for (std::size_t pos = 0; selected.size() < k; ++pos) selected.push_back(front[order[pos]]);
        break;
    }
    return selected;
}

Spea2Fitness spea2_fitness(std::span<const ObjectiveVector> objectives) {
    const std::size_t n = objectives.size();
    Spea2Fitness out;
    out.strength.assign(n, 0.0);
    out.raw.assign(n, 0.0);
    out.fitness.assign(n, 0.0);

    // Strength = how many pool members each individual dominates; raw
    // fitness = sum of the strengths of one's dominators.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dominates(objectives[i], objectives[j])) out.strength[i] += 1.0;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dominates(objectives[j], objectives[i])) out.raw[i] += out.strength[j];
        }
    }

    // Density from the kth-nearest neighbor, k = floor(sqrt(n)).
    const auto kth = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))));
    for (std::size_t i = 0; i < n; ++i) {
        if (n == 1) {
            out.fitness[i] = out.raw[i] + 0.5;
            continue;
        }
        std::vector<double> dist;
        dist.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) dist.push_back(std::sqrt(sq_distance(objectives[i], objectives[j])));
        }
        std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kth - 1), dist.end());
        const double sigma = dist[kth - 1];
        out.fitness[i] = out.raw[i] + 1.0 / (sigma + 2.0);
    }
    return out;
}

std::vector<std::size_t> spea2_select_indices(std::span<const ObjectiveVector> objectives, std::size_t k) {
    const std::size_t n = objectives.size();
    if (n == 0) throw Error("spea2_select: empty population");
    if (k >= n) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }

    const std::vector<double> fitness = spea2_fitness(objectives).fitness;

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i) {
        if (fitness[i] < 1.0) kept.push_back(i);
    }

    if (kept.size() > k) {
        // Truncation: repeatedly drop the member closest to its nearest
        // remaining neighbor.
        while (kept.size() > k) {
            std::size_t victim_pos = 0;
            double victim_dist = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < kept.size(); ++a) {
                double nearest = std::numeric_limits<double>::infinity();
                for (std::size_t b = 0; b < kept.size(); ++b) {
                    if (a != b) nearest = std::min(nearest, sq_distance(objectives[kept[a]], objectives[kept[b]]));
                }
                if (nearest < victim_dist ||
                    (nearest == victim_dist && stable_less(objectives, kept[a], kept[victim_pos]))) {
                    victim_dist = nearest;
                    victim_pos = a;
                }
            }
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(victim_pos));
        }
    } else if (kept.size() < k) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n; ++i) {
            if (fitness[i] >= 1.0) rest.push_back(i);
        }
        std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
            if (fitness[a] != fitness[b]) return fitness[a] < fitness[b];
            return stable_less(objectives, a, b);
        });
        for (std::size_t i = 0; kept.size() < k; ++i) kept.push_back(rest[i]);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

namespace {

std::vector<ObjectiveVector> objective_list(const Population& pop) {
    std::vector<ObjectiveVector> out;
    out.reserve(pop.members.size());
    for (const Individual& ind : pop.members) out.push_back(ind.objectives);
    return out;
}

std::vector<Individual> gather(const Population& pop, const std::vector<std::size_t>& idx) {
    std::vector<Individual> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(pop.members[i]);
    return out;
}

}  // namespace

std::vector<Individual> tournament_select(const Population& pop, std::size_t k, std::size_t tour_size,
                                          Rng& rng) {
    std::vector<double> fitness;
    fitness.reserve(pop.members.size());
    for (const Individual& ind : pop.members) fitness.push_back(ind.objectives.q);
    return gather(pop, tournament_select_indices(fitness, k, tour_size, rng));
}

std::vector<Individual> nsga2_select(const Population& pop, std::size_t k) {
    const auto objectives = objective_list(pop);
    return gather(pop, nsga2_select_indices(objectives, k));
}

std::vector<Individual> spea2_select(const Population& pop, std::size_t k) {
    const auto objectives = objective_list(pop);
    return gather(pop, spea2_select_indices(objectives, k));
}

}  // namespace evopipe
