#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "hitforge/circuits.hpp"
#include "hitforge/hitting_set.hpp"
#include "hitforge/limits.hpp"
#include "hitforge/properties.hpp"
#include "hitforge/rational.hpp"

namespace hitforge {

enum class CappMethod { exact, set_based };
std::string_view capp_method_name(CappMethod m);

struct CappEstimate {
    Rational value;
    CappMethod method = CappMethod::exact;
    std::optional<Provenance> set_provenance;
};

/// Fraction of all inputs the circuit accepts; arity <= limits.max_enum_arity.
Rational exact_acceptance(const circuits::BooleanCircuit& circuit, const Limits& limits = default_limits());

/// Fraction of H's elements (counted with multiplicity) whose leftmost
/// arity(circuit) bits the circuit accepts. H's strings must be at least as
/// long as the circuit's arity.
CappEstimate capp_estimate(const circuits::BooleanCircuit& circuit, const HittingSet& h,
                           const Limits& limits = default_limits());

/// | density(Q, n) - |H ∩ Q| / |H| |, with multiplicity; H must have length n.
Rational discrepancy(const HittingSet& h, const DenseProperty& q, std::size_t n,
                     const Limits& limits = default_limits());

}  // namespace hitforge
