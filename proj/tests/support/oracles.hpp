#pragma once

// Reference implementations used only by tests. They follow the textbook
// definitions directly and are deliberately slow.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "desync/dsl.hpp"
#include "desync/lts.hpp"

namespace oracle {

using desync::Lts;
using desync::StateId;

/// Greatest fixpoint of the strong bisimulation conditions over the disjoint
/// union; termination must match.
bool strong_bisimilar(const Lts& a, const Lts& b);

/// Greatest fixpoint of the (divergence-insensitive) branching bisimulation
/// conditions: a step s -l-> s' is matched when l is tau and s' ~ t, or
/// t =tau*=> t'' -l-> t' with s ~ t'' and s' ~ t'.
bool branching_bisimilar(const Lts& a, const Lts& b);

/// Visible traces of length <= depth, each followed by "<termination>" when
/// some state reached by that trace terminates.
std::set<std::vector<std::string>> weak_traces(const Lts& lts, std::size_t depth);

/// Whether `lts` can perform the visible trace (a trailing "<termination>"
/// entry requires a terminating state).
bool can_perform(const Lts& lts, const std::vector<std::string>& trace);

/// Random LTS over the given labels ("tau" is silent).
Lts random_lts(std::mt19937& rng, std::size_t max_states, const std::vector<std::string>& labels,
               double tau_weight = 0.25);

/// Applies random transformations that preserve strong bisimilarity
/// (renumbering, state splitting) and, if `silent`, inserts inert silent
/// steps that preserve branching bisimilarity.
Lts equivalent_variant(std::mt19937& rng, const Lts& lts, bool silent);

/// One random edit: add or drop a transition, or flip a termination flag.
Lts mutate(std::mt19937& rng, const Lts& lts, const std::vector<std::string>& labels);

/// Random well-formed specification.
desync::SpecFile random_spec(std::mt19937& rng);

}  // namespace oracle
