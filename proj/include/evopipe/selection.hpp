#pragma once

#include <span>
#include <vector>

#include "evopipe/objectives.hpp"
#include "evopipe/rng.hpp"

namespace evopipe {

// k winners of independent size-`tour_size` tournaments (minimization),
// contestants drawn with replacement. Returns indices into `fitness`.
std::vector<std::size_t> tournament_select_indices(std::span<const double> fitness, std::size_t k,
                                                   std::size_t tour_size, Rng& rng);

// NSGA-II: fast non-dominated sorting, crowding distance on the split front.
std::vector<std::size_t> nsga2_select_indices(std::span<const ObjectiveVector> objectives, std::size_t k);

// SPEA2 fitness (raw strength sum + kth-nearest-neighbor density) with the
// environmental selection step applied to the pool itself.
std::vector<std::size_t> spea2_select_indices(std::span<const ObjectiveVector> objectives, std::size_t k);

// SPEA2 bookkeeping for one pool: strength S(i), raw fitness R(i), and the
// final fitness R(i) + D(i).
struct Spea2Fitness {
    std::vector<double> strength;
    std::vector<double> raw;
    std::vector<double> fitness;
};

Spea2Fitness spea2_fitness(std::span<const ObjectiveVector> objectives);

std::vector<Individual> tournament_select(const Population& pop, std::size_t k, std::size_t tour_size,
                                          Rng& rng);
std::vector<Individual> nsga2_select(const Population& pop, std::size_t k);
std::vector<Individual> spea2_select(const Population& pop, std::size_t k);

}  // namespace evopipe
