#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hitforge/bits.hpp"
#include "hitforge/limits.hpp"

namespace hitforge::circuits {

/// The ten two-input operations that depend on both inputs. The enumerator
/// value is the operation's own truth table: bit (2a+b) holds op(a,b).
enum class GateOp : std::uint8_t {
    NOR = 1,
    NOTAND = 2,  // !a & b
    ANDNOT = 4,  // a & !b
    XOR = 6,
    NAND = 7,
    AND = 8,
    XNOR = 9,
    NOTOR = 11,  // !a | b
    ORNOT = 13,  // a | !b
    OR = 14,
};

inline constexpr std::array<GateOp, 10> kGateOps = {
    GateOp::NOR, GateOp::NOTAND, GateOp::ANDNOT, GateOp::XOR,   GateOp::NAND,
    GateOp::AND, GateOp::XNOR,   GateOp::NOTOR,  GateOp::ORNOT, GateOp::OR,
};

std::string_view op_name(GateOp op);
std::optional<GateOp> parse_op(std::string_view name);

inline bool apply(GateOp op, bool a, bool b) noexcept {
    return (static_cast<unsigned>(op) >> ((a ? 2U : 0U) | (b ? 1U : 0U))) & 1U;
}

/// Bitwise application to 64 evaluations at once.
inline std::uint64_t apply(GateOp op, std::uint64_t a, std::uint64_t b) noexcept {
    const unsigned t = static_cast<unsigned>(op);
    std::uint64_t r = 0;
    if (t & 1U) r |= ~a & ~b;
    if (t & 2U) r |= ~a & b;
    if (t & 4U) r |= a & ~b;
    if (t & 8U) r |= a & b;
    return r;
}

/// A gate reads two nodes. Node indices: 0..k-1 are the inputs x1..xk,
/// k is the constant 0, k+1 the constant 1, and k+2+i is gate i.
struct Gate {
    GateOp op;
    std::size_t left;
    std::size_t right;
    friend bool operator==(const Gate&, const Gate&) = default;
};

class BooleanCircuit {
public:
    /// Validates topological order and that every gate is reachable from the
    /// output; throws InputShapeError otherwise.
    BooleanCircuit(std::size_t arity, std::vector<Gate> gates, std::size_t output);

    static BooleanCircuit constant(std::size_t arity, bool value);
    /// x_{var+1}, for var in [0, arity).
    static BooleanCircuit projection(std::size_t arity, std::size_t var);

    std::size_t arity() const noexcept { return arity_; }
    /// Number of gates.
    std::size_t size() const noexcept { return gates_.size(); }
    const std::vector<Gate>& gates() const noexcept { return gates_; }
    std::size_t output() const noexcept { return output_; }
    std::size_t node_count() const noexcept { return arity_ + 2 + gates_.size(); }

    friend bool operator==(const BooleanCircuit&, const BooleanCircuit&) = default;

private:
    std::size_t arity_;
    std::vector<Gate> gates_;
    std::size_t output_;
};

/// Bits of a k-ary Boolean function: position j holds f at the binary
/// expansion of j, with x1 as the most significant bit.
class TruthTable {
public:
    TruthTable(std::size_t arity, BitString bits);

    /// For arity <= 6: bit j of `mask` is position j.
    static TruthTable from_mask(std::size_t arity, std::uint64_t mask);

    /// A string read as a truth table after appending zeroes up to the next
    /// power of two length (length 1 stays arity 0).
    static TruthTable zero_padded(const BitString& bits);

    std::size_t arity() const noexcept { return arity_; }
    const BitString& bits() const noexcept { return bits_; }
    bool operator[](std::size_t j) const noexcept { return bits_[j]; }
    /// f evaluated on an `arity`-bit argument.
    bool at(const BitString& argument) const;
    std::uint64_t to_mask() const;

    friend bool operator==(const TruthTable&, const TruthTable&) = default;

private:
    std::size_t arity_;
    BitString bits_;
};

bool eval_circuit(const BooleanCircuit& circuit, const BitString& input);

/// Full truth table; arity <= limits.max_enum_arity.
TruthTable truth_table(const BooleanCircuit& circuit, const Limits& limits = default_limits());

/// Truth table as a 64-bit mask; arity <= 6.
std::uint64_t truth_mask(const BooleanCircuit& circuit);

/// Mask of all 2^(2^k) positions in use for arity k <= 6.
std::uint64_t full_mask(std::size_t arity);
/// Mask of input variable x_{var+1} at arity k <= 6.
std::uint64_t projection_mask(std::size_t arity, std::size_t var);

/// Circuit text format: `k=<arity>;g=<op>(<i>,<j>);...;out=<idx>`.
std::string format_circuit(const BooleanCircuit& circuit);
BooleanCircuit parse_circuit(std::string_view line);

/// Upper bound on the number of circuits the canonical enumeration visits.
std::uint64_t estimated_circuit_count(std::size_t arity, std::size_t max_gates);

/// All circuits of a given arity with at most `max_gates` gates, in a
/// canonical form:
///   - gate-free circuits are the inputs and the two constants;
///   - a gate reads two distinct non-constant nodes with one of the ten
///     operations, or negates one node as XOR with the constant 1;
///   - the output is the last gate and every gate feeds a later gate;
///   - when a gate does not read its predecessor, its (right, left, op) key
///     is strictly larger than the predecessor's.
/// Every function computable within the bound is computed by some yielded
/// circuit. The object is immutable and each for_each call restarts the
/// stream from the beginning.
class CircuitEnumeration {
public:
    /// Throws ResourceLimitError before any work when the estimated count
    /// exceeds limits.max_enumerated_circuits.
    CircuitEnumeration(std::size_t arity, std::size_t max_gates,
                       const Limits& limits = default_limits());

    std::size_t arity() const noexcept { return arity_; }
    std::size_t max_gates() const noexcept { return max_gates_; }

    void for_each(const std::function<void(const BooleanCircuit&)>& visit) const;

private:
    std::size_t arity_;
    std::size_t max_gates_;
};

inline CircuitEnumeration enumerate_circuits(std::size_t arity, std::size_t max_gates,
                                             const Limits& limits = default_limits()) {
    return CircuitEnumeration(arity, max_gates, limits);
}

/// Every function of a fixed arity (<= 6) computable with at most `bound`
/// gates, together with its exact minimum gate count.
class FunctionTable {
public:
    FunctionTable(std::size_t arity, std::size_t bound);

    std::size_t arity() const noexcept { return arity_; }
    std::size_t bound() const noexcept { return bound_; }

    /// Minimum gate count, or nullopt when it exceeds bound().
    std::optional<unsigned> complexity(std::uint64_t mask) const;
    bool contains(std::uint64_t mask) const { return complexity(mask).has_value(); }
    std::uint64_t count() const noexcept { return count_; }
    /// Every function of this arity is present.
    bool saturated() const noexcept;
    /// Present masks in increasing order.
    std::vector<std::uint64_t> functions() const;

    /// Lowers the stored level of `mask` to `level` if smaller.
    void record(std::uint64_t mask, unsigned level);
    /// Same content relabelled with another bound. Callers guarantee the
    /// content is still complete for that bound.
    FunctionTable rebound(std::size_t bound) const;

private:
    static constexpr std::uint8_t kAbsent = 0xFF;
    std::size_t arity_;
    std::size_t bound_;
    std::uint64_t count_ = 0;
    std::vector<std::uint8_t> dense_;                       // arity <= 4
    std::unordered_map<std::uint64_t, std::uint8_t> sparse_;  // arity 5, 6
};

/// Largest gate bound the exhaustive search runs to, per arity (index =
/// arity). Arities 1..3 saturate below their cap. See the feasibility table
/// in README.md.
inline constexpr std::array<std::size_t, 7> kDefaultSearchGateCap = {0, 8, 8, 8, 6, 5, 4};

/// The memoized table of functions with complexity <= max_gates.
/// Bounds past saturation are answered from the saturated table. One bound
/// past the cap is accepted when every remaining function can be shown to be
/// a single gate over two tabulated functions whose costs fit (which proves
/// saturation there); anything else past the cap is a ResourceLimitError.
/// Thread-safe.
std::shared_ptr<const FunctionTable> reachable_functions(
    std::size_t arity, std::size_t max_gates, const Limits& limits = default_limits(),
    const std::array<std::size_t, 7>& search_cap = kDefaultSearchGateCap);

/// Minimum number of gates over all circuits computing `tt`.
/// Requires arity <= limits.max_oracle_arity; throws ResourceLimitError if
/// the answer lies beyond the search cap.
unsigned circuit_complexity(const TruthTable& tt, const Limits& limits = default_limits());

/// True iff circuit_complexity(tt) > threshold, deciding only as much as
/// needed.
bool complexity_exceeds(const TruthTable& tt, std::size_t threshold,
                        const Limits& limits = default_limits());

}  // namespace hitforge::circuits
