#ifndef CONTACTBENCH_GENERATORS_HPP
#define CONTACTBENCH_GENERATORS_HPP

#include <random>

#include "contactbench/contact-problem.hpp"

namespace contactbench {

/// One contact: G = A'A + 0.1 I and g with entries uniform in [-2, 2],
/// mu drawn from {0, 0.3, 0.5, 1.0}. With `zero_coupling` the G_NT entries are zeroed.
ContactProblem random_single_contact(std::mt19937_64& rng, bool zero_coupling);

/// num_contacts frictionless contacts, G = A'A + 0.1 I with A square, entries in [-2, 2].
ContactProblem random_frictionless(std::mt19937_64& rng, int num_contacts);

/// A sliding single contact with G_NT = (0.4, -0.3) and mu = 0.5.
ContactProblem coupled_sliding_problem();

}  // namespace contactbench

#endif
