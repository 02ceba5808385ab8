#include "hitforge/capp.hpp"

#include "hitforge/errors.hpp"

namespace hitforge {

std::string_view capp_method_name(CappMethod m) { return m == CappMethod::exact ? "exact" : "set-based"; }

Rational exact_acceptance(const circuits::BooleanCircuit& circuit, const Limits& limits) {
    const auto tt = circuits::truth_table(circuit, limits);
    return Rational(static_cast<std::int64_t>(tt.bits().count_ones()), std::int64_t{1} << circuit.arity());
}

CappEstimate capp_estimate(const circuits::BooleanCircuit& circuit, const HittingSet& h, const Limits& limits) {
    const std::size_t a = circuit.arity();
    if (h.n() < a) {
        throw InputShapeError("hitting-set strings have length " + std::to_string(h.n()) + ", circuit reads " +
                              std::to_string(a) + " bits");
    }
    std::optional<circuits::TruthTable> tt;
    if (a <= limits.max_enum_arity && a <= 20) tt = circuits::truth_table(circuit, limits);
    std::uint64_t accepted = 0;
    for (const auto& x : h.elements()) {
        if (tt) {
            std::size_t index = 0;
            for (std::size_t i = 0; i < a; ++i) index = (index << 1) | static_cast<std::size_t>(x[i]);
            accepted += (*tt)[index];
        } else {
            accepted += circuits::eval_circuit(circuit, left_n(x, a));
        }
    }
    return {Rational(static_cast<std::int64_t>(accepted), static_cast<std::int64_t>(h.size())), CappMethod::set_based,
            h.provenance()};
}

Rational discrepancy(const HittingSet& h, const DenseProperty& q, std::size_t n, const Limits& limits) {
    if (h.n() != n) {
        throw InputShapeError("hitting set has length " + std::to_string(h.n()) + ", expected " + std::to_string(n));
    }
    const Rational truth = density(q, n, limits);
    std::size_t members = 0;
    for (bool b : q.contains_all(h.elements())) members += b;
    const Rational measured(static_cast<std::int64_t>(members), static_cast<std::int64_t>(h.size()));
    return truth > measured ? truth - measured : measured - truth;
}

}  // namespace hitforge
