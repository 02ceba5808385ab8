#include "hitforge/circuits.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "hitforge/errors.hpp"

namespace hitforge::circuits {

namespace {

constexpr std::array<std::pair<GateOp, std::string_view>, 10> kOpNames = {{
    {GateOp::AND, "AND"},
    {GateOp::OR, "OR"},
    {GateOp::XOR, "XOR"},
    {GateOp::NAND, "NAND"},
    {GateOp::NOR, "NOR"},
    {GateOp::XNOR, "XNOR"},
    {GateOp::ANDNOT, "ANDNOT"},
    {GateOp::NOTAND, "NOTAND"},
    {GateOp::ORNOT, "ORNOT"},
    {GateOp::NOTOR, "NOTOR"},
}};

bool is_gate_op(unsigned code) {
    return std::any_of(kGateOps.begin(), kGateOps.end(),
                       [code](GateOp op) { return static_cast<unsigned>(op) == code; });
}

std::size_t parse_index(std::string_view text, std::string_view line) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw FormatError("bad index '" + std::string(text) + "' in circuit '" + std::string(line) +
                          "'");
    }
    return value;
}

}  // namespace

std::string_view op_name(GateOp op) {
    for (auto [o, name] : kOpNames) {
        if (o == op) return name;
    }
    return "?";
}

std::optional<GateOp> parse_op(std::string_view name) {
    for (auto [o, n] : kOpNames) {
        if (n == name) return o;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// BooleanCircuit

BooleanCircuit::BooleanCircuit(std::size_t arity, std::vector<Gate> gates, std::size_t output)
    : arity_(arity), gates_(std::move(gates)), output_(output) {
    const std::size_t first_gate = arity_ + 2;
    for (std::size_t i = 0; i < gates_.size(); ++i) {
        const Gate& g = gates_[i];
        if (!is_gate_op(static_cast<unsigned>(g.op))) {
            throw InputShapeError("gate " + std::to_string(i) + " uses a degenerate operation");
        }
        if (g.left >= first_gate + i || g.right >= first_gate + i) {
            throw InputShapeError("gate " + std::to_string(i) + " reads a node that does not precede it");
        }
    }
    if (output_ >= node_count()) {
        throw InputShapeError("output index " + std::to_string(output_) + " out of range");
    }
    std::vector<bool> reached(gates_.size(), false);
    if (output_ >= first_gate) reached[output_ - first_gate] = true;
    for (std::size_t i = gates_.size(); i-- > 0;) {
        if (!reached[i]) {
            throw InputShapeError("gate " + std::to_string(i) + " is not reachable from the output");
        }
        for (std::size_t operand : {gates_[i].left, gates_[i].right}) {
            if (operand >= first_gate) reached[operand - first_gate] = true;
        }
    }
}

BooleanCircuit BooleanCircuit::constant(std::size_t arity, bool value) {
    return BooleanCircuit(arity, {}, arity + (value ? 1 : 0));
}

BooleanCircuit BooleanCircuit::projection(std::size_t arity, std::size_t var) {
    if (var >= arity) throw InputShapeError("projection variable out of range");
    return BooleanCircuit(arity, {}, var);
}

// ---------------------------------------------------------------------------
// TruthTable

TruthTable::TruthTable(std::size_t arity, BitString bits) : arity_(arity), bits_(std::move(bits)) {
    if (arity_ >= 63 || bits_.size() != (std::size_t{1} << arity_)) {
        throw InputShapeError("truth table of arity " + std::to_string(arity_) + " needs " +
                              (arity_ < 63 ? std::to_string(std::size_t{1} << arity_) : "too many") +
                              " bits, got " + std::to_string(bits_.size()));
    }
}

TruthTable TruthTable::from_mask(std::size_t arity, std::uint64_t mask) {
    if (arity > 6) throw InputShapeError("mask truth tables support arity <= 6");
    const std::size_t len = std::size_t{1} << arity;
    BitString bits = BitString::filled(len, false);
    for (std::size_t j = 0; j < len; ++j) bits.set(j, (mask >> j) & 1U);
    return TruthTable(arity, std::move(bits));
}

TruthTable TruthTable::zero_padded(const BitString& bits) {
    if (bits.empty()) throw InputShapeError("empty truth table");
    std::size_t arity = 0;
    while ((std::size_t{1} << arity) < bits.size()) ++arity;
    BitString padded = bits;
    while (padded.size() < (std::size_t{1} << arity)) padded.push_back(false);
    return TruthTable(arity, std::move(padded));
}

bool TruthTable::at(const BitString& argument) const {
    if (argument.size() != arity_) {
        throw InputShapeError("truth table of arity " + std::to_string(arity_) +
                              " evaluated on " + std::to_string(argument.size()) + " bits");
    }
    return bits_[argument.to_uint()];
}

std::uint64_t TruthTable::to_mask() const {
    if (arity_ > 6) throw InputShapeError("mask truth tables support arity <= 6");
    std::uint64_t m = 0;
    for (std::size_t j = 0; j < bits_.size(); ++j) {
        if (bits_[j]) m |= std::uint64_t{1} << j;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Evaluation

bool eval_circuit(const BooleanCircuit& circuit, const BitString& input) {
    const std::size_t k = circuit.arity();
    if (input.size() != k) {
        throw InputShapeError("circuit of arity " + std::to_string(k) + " given " +
                              std::to_string(input.size()) + " input bits");
    }
    std::vector<bool> value(circuit.node_count());
    for (std::size_t i = 0; i < k; ++i) value[i] = input[i];
    value[k] = false;
    value[k + 1] = true;
    for (std::size_t i = 0; i < circuit.size(); ++i) {
        const Gate& g = circuit.gates()[i];
        value[k + 2 + i] = apply(g.op, static_cast<bool>(value[g.left]), static_cast<bool>(value[g.right]));
    }
    return value[circuit.output()];
}

std::uint64_t full_mask(std::size_t arity) {
    if (arity > 6) throw InputShapeError("mask truth tables support arity <= 6");
    return arity == 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::size_t{1} << arity)) - 1;
}

std::uint64_t projection_mask(std::size_t arity, std::size_t var) {
    if (arity > 6 || var >= arity) throw InputShapeError("projection mask out of range");
    const std::size_t shift = arity - 1 - var;
    std::uint64_t m = 0;
    for (std::size_t j = 0; j < (std::size_t{1} << arity); ++j) {
        if ((j >> shift) & 1U) m |= std::uint64_t{1} << j;
    }
    return m;
}

namespace {

// Evaluates all gates on a 64-wide block of inputs; `inputs[i]` holds x_{i+1}.
std::uint64_t eval_block(const BooleanCircuit& c, const std::vector<std::uint64_t>& inputs,
                         std::vector<std::uint64_t>& scratch) {
    const std::size_t k = c.arity();
    scratch.assign(c.node_count(), 0);
    std::copy(inputs.begin(), inputs.end(), scratch.begin());
    scratch[k] = 0;
    scratch[k + 1] = ~std::uint64_t{0};
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Gate& g = c.gates()[i];
        scratch[k + 2 + i] = apply(g.op, scratch[g.left], scratch[g.right]);
    }
    return scratch[c.output()];
}

}  // namespace

std::uint64_t truth_mask(const BooleanCircuit& circuit) {
    const std::size_t k = circuit.arity();
    if (k > 6) throw InputShapeError("mask truth tables support arity <= 6");
    std::vector<std::uint64_t> inputs(k);
    for (std::size_t i = 0; i < k; ++i) inputs[i] = projection_mask(k, i);
    std::vector<std::uint64_t> scratch;
    return eval_block(circuit, inputs, scratch) & full_mask(k);
}

TruthTable truth_table(const BooleanCircuit& circuit, const Limits& limits) {
    const std::size_t k = circuit.arity();
    if (k > limits.max_enum_arity) {
        throw ResourceLimitError("truth table of arity " + std::to_string(k) +
                                 " exceeds the enumeration cap " +
                                 std::to_string(limits.max_enum_arity));
    }
    if (k <= 6) return TruthTable::from_mask(k, truth_mask(circuit));

    // Blocks of 64 consecutive positions: the low six variables vary inside a
    // block as in a 6-ary table, the high ones are constant across it.
    const std::size_t len = std::size_t{1} << k;
    BitString bits = BitString::filled(len, false);
    std::vector<std::uint64_t> inputs(k);
    std::vector<std::uint64_t> scratch;
    for (std::size_t base = 0; base < len; base += 64) {
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t shift = k - 1 - i;
            if (shift < 6) {
                inputs[i] = projection_mask(6, 5 - shift);
            } else {
                inputs[i] = ((base >> shift) & 1U) ? ~std::uint64_t{0} : 0;
            }
        }
        const std::uint64_t out = eval_block(circuit, inputs, scratch);
        for (std::size_t j = 0; j < 64; ++j) bits.set(base + j, (out >> j) & 1U);
    }
    return TruthTable(k, std::move(bits));
}

// ---------------------------------------------------------------------------
// Text format

std::string format_circuit(const BooleanCircuit& circuit) {
    std::ostringstream out;
    out << "k=" << circuit.arity();
    for (const Gate& g : circuit.gates()) {
        out << ";g=" << op_name(g.op) << '(' << g.left << ',' << g.right << ')';
    }
    out << ";out=" << circuit.output();
    return out.str();
}

BooleanCircuit parse_circuit(std::string_view line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    std::vector<std::string_view> fields;
    for (std::size_t start = 0;;) {
        auto semi = line.find(';', start);
        fields.push_back(line.substr(start, semi == std::string_view::npos ? semi : semi - start));
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    if (fields.size() < 2 || !fields.front().starts_with("k=") || !fields.back().starts_with("out=")) {
        throw FormatError("circuit must look like k=<arity>;...;out=<idx>: '" + std::string(line) + "'");
    }
    const std::size_t arity = parse_index(fields.front().substr(2), line);
    const std::size_t output = parse_index(fields.back().substr(4), line);
    std::vector<Gate> gates;
    for (std::size_t f = 1; f + 1 < fields.size(); ++f) {
        std::string_view g = fields[f];
        auto open = g.find('(');
        auto comma = g.find(',');
        if (!g.starts_with("g=") || open == std::string_view::npos || comma == std::string_view::npos ||
            comma < open || !g.ends_with(")")) {
            throw FormatError("bad gate '" + std::string(g) + "'");
        }
        auto op = parse_op(g.substr(2, open - 2));
        if (!op) throw FormatError("unknown gate operation in '" + std::string(g) + "'");
        gates.push_back(Gate{*op, parse_index(g.substr(open + 1, comma - open - 1), line),
                             parse_index(g.substr(comma + 1, g.size() - comma - 2), line)});
    }
    return BooleanCircuit(arity, std::move(gates), output);
}

// ---------------------------------------------------------------------------
// Literal canonical enumeration

std::uint64_t estimated_circuit_count(std::size_t arity, std::size_t max_gates) {
    // Per level: pairs of distinct non-constant nodes times ten operations,
    // plus one negation per node.
    long double total = static_cast<long double>(arity + 2);
    long double level = 1;
    for (std::size_t d = 0; d < max_gates; ++d) {
        const long double nodes = static_cast<long double>(arity + d);
        level *= nodes * (nodes - 1) / 2 * 10 + nodes;
        total += level;
        if (total > 1e19L) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(total);
}

CircuitEnumeration::CircuitEnumeration(std::size_t arity, std::size_t max_gates, const Limits& limits)
    : arity_(arity), max_gates_(max_gates) {
    if (arity == 0) throw InputShapeError("enumeration needs at least one input");
    const auto estimate = estimated_circuit_count(arity, max_gates);
    if (estimate > limits.max_enumerated_circuits) {
        throw ResourceLimitError("enumerating circuits with k=" + std::to_string(arity) +
                                 ", s=" + std::to_string(max_gates) + " would visit up to " +
                                 std::to_string(estimate) + " circuits (cap " +
                                 std::to_string(limits.max_enumerated_circuits) + ")");
    }
}

namespace {

struct EnumKey {
    std::size_t right, left;
    unsigned op;
    auto operator<=>(const EnumKey&) const = default;
};

class LiteralWalker {
public:
    LiteralWalker(std::size_t k, std::size_t s, const std::function<void(const BooleanCircuit&)>& visit)
        : k_(k), s_(s), visit_(visit) {}

    void run() {
        for (std::size_t i = 0; i < k_ + 2; ++i) visit_(BooleanCircuit(k_, {}, i));
        place(0);
    }

private:
    // Nodes addressable by gate d are the inputs 0..k-1 and gates 0..d-1
    // (circuit indices k+2..k+1+d); constants only appear in negations.
    std::size_t node_id(std::size_t position) const {
        return position < k_ ? position : position + 2;
    }

    void try_gate(const Gate& g, std::size_t d) {
        const std::size_t first_gate = k_ + 2;
        const std::size_t prev = first_gate + d - 1;
        const EnumKey key{g.right, g.left, static_cast<unsigned>(g.op)};
        if (d > 0 && g.left != prev && g.right != prev && !(keys_.back() < key)) return;

        unsigned consumed = 0;
        for (std::size_t operand : {g.left, g.right}) {
            if (operand >= first_gate && uses_[operand - first_gate] == 0) ++consumed;
        }
        const std::size_t unused_after = unused_ + 1 - consumed;
        const std::size_t remaining = s_ - d - 1;
        if (unused_after > remaining + 1) return;

        gates_.push_back(g);
        keys_.push_back(key);
        uses_.push_back(0);
        for (std::size_t operand : {g.left, g.right}) {
            if (operand >= first_gate) ++uses_[operand - first_gate];
        }
        const std::size_t saved_unused = unused_;
        unused_ = unused_after;

        if (unused_ == 1) visit_(BooleanCircuit(k_, gates_, first_gate + d));
        place(d + 1);

        unused_ = saved_unused;
        for (std::size_t operand : {g.left, g.right}) {
            if (operand >= first_gate) --uses_[operand - first_gate];
        }
        uses_.pop_back();
        keys_.pop_back();
        gates_.pop_back();
    }

    void place(std::size_t d) {
        if (d == s_) return;
        const std::size_t positions = k_ + d;
        const std::size_t one = k_ + 1;
        for (std::size_t r = 0; r < positions; ++r) {
            for (std::size_t l = 0; l < r; ++l) {
                for (GateOp op : kGateOps) try_gate(Gate{op, node_id(l), node_id(r)}, d);
            }
        }
        for (std::size_t x = 0; x < positions; ++x) {
            const std::size_t id = node_id(x);
            try_gate(id < one ? Gate{GateOp::XOR, id, one} : Gate{GateOp::XOR, one, id}, d);
        }
    }

    std::size_t k_, s_;
    const std::function<void(const BooleanCircuit&)>& visit_;
    std::vector<Gate> gates_;
    std::vector<EnumKey> keys_;
    std::vector<unsigned> uses_;
    std::size_t unused_ = 0;
};

}  // namespace

void CircuitEnumeration::for_each(const std::function<void(const BooleanCircuit&)>& visit) const {
    LiteralWalker(arity_, max_gates_, visit).run();
}

// ---------------------------------------------------------------------------
// FunctionTable

FunctionTable::FunctionTable(std::size_t arity, std::size_t bound) : arity_(arity), bound_(bound) {
    if (arity > 6) throw InputShapeError("function tables support arity <= 6");
    if (arity <= 4) dense_.assign(std::size_t{1} << (std::size_t{1} << arity), kAbsent);
}

std::optional<unsigned> FunctionTable::complexity(std::uint64_t mask) const {
    if (!dense_.empty()) {
        if (mask >= dense_.size()) return std::nullopt;
        auto v = dense_[mask];
        if (v == kAbsent) return std::nullopt;
        return v;
    }
    auto it = sparse_.find(mask);
    if (it == sparse_.end()) return std::nullopt;
    return it->second;
}

void FunctionTable::record(std::uint64_t mask, unsigned level) {
    const auto lv = static_cast<std::uint8_t>(level);
    if (!dense_.empty()) {
        auto& slot = dense_[mask];
        if (slot == kAbsent) {
            ++count_;
            slot = lv;
        } else if (lv < slot) {
            slot = lv;
        }
        return;
    }
    auto [it, inserted] = sparse_.try_emplace(mask, lv);
    if (inserted) {
        ++count_;
    } else if (lv < it->second) {
        it->second = lv;
    }
}

bool FunctionTable::saturated() const noexcept {
    if (arity_ >= 6) return false;
    return count_ == (std::uint64_t{1} << (std::size_t{1} << arity_));
}

std::vector<std::uint64_t> FunctionTable::functions() const {
    std::vector<std::uint64_t> out;
    out.reserve(count_);
    if (!dense_.empty()) {
        for (std::size_t m = 0; m < dense_.size(); ++m) {
            if (dense_[m] != kAbsent) out.push_back(m);
        }
    } else {
        for (const auto& [m, lv] : sparse_) out.push_back(m);
        std::sort(out.begin(), out.end());
    }
    return out;
}

FunctionTable FunctionTable::rebound(std::size_t bound) const {
    FunctionTable t = *this;
    t.bound_ = bound;
    return t;
}

// ---------------------------------------------------------------------------
// Reachable-function search
//
// Depth-first over canonical gate sequences on truth-table masks. Besides the
// ordering rule shared with the literal enumeration, two prunings keep the
// search small and are safe for minimum circuits:
//   - a gate never duplicates the function of an existing node;
//   - a prefix with U gates that no later gate reads, and R gates still to
//     place, needs U <= R + 1, since each gate consumes at most two of them.
// Every minimum circuit survives both, so the smallest level at which a mask
// is recorded is its exact complexity.
//
// For arity >= 2 the search also factors out the symmetry group generated by
// permuting inputs, negating inputs and negating the output, under which the
// complexity of every function other than the constants and the (negated)
// projections is invariant. Any minimum circuit can be mapped by the group
// so that one of its input-only gates becomes AND(x1,x2) or XOR(x1,x2); the
// search therefore fixes gate 0 to one of those two and the table is closed
// under the group afterwards.

namespace {

class ReachableSearch {
public:
    ReachableSearch(std::size_t k, std::size_t s, FunctionTable& table, bool symmetric)
        : k_(k), s_(s), table_(table), full_(full_mask(k)), symmetric_(symmetric) {
        for (std::size_t i = 0; i < k; ++i) nodes_.push_back(projection_mask(k, i));
    }

    void run() { place(0); }

private:
    // (right, left, op) packed so that integer order is lexicographic order.
    static std::uint32_t key(std::size_t right, std::size_t left, unsigned op) {
        return static_cast<std::uint32_t>((right << 16) | (left << 8) | op);
    }
    static constexpr unsigned kNegation = 16;

    bool duplicate(std::uint64_t m) const {
        if (m == 0 || m == full_) return true;
        return std::find(nodes_.begin(), nodes_.end(), m) != nodes_.end();
    }

    unsigned fresh(std::size_t position) const {
        return (position >= k_ && uses_[position - k_] == 0) ? 1U : 0U;
    }

    void push(std::size_t l, std::size_t r, std::uint32_t k, std::uint64_t m, std::size_t d,
              std::size_t unused_after) {
        table_.record(m, static_cast<unsigned>(d + 1));
        nodes_.push_back(m);
        keys_.push_back(k);
        uses_.push_back(0);
        if (l >= k_) ++uses_[l - k_];
        if (r >= k_ && r != l) ++uses_[r - k_];
        const std::size_t saved = unused_;
        unused_ = unused_after;
        place(d + 1);
        unused_ = saved;
        if (l >= k_) --uses_[l - k_];
        if (r >= k_ && r != l) --uses_[r - k_];
        uses_.pop_back();
        keys_.pop_back();
        nodes_.pop_back();
    }

    // The last gate only records; recording a non-canonical or duplicate
    // function there is harmless because the table keeps minimum levels.
    void place_last(std::size_t d) {
        const std::size_t positions = k_ + d;
        const auto level = static_cast<unsigned>(d + 1);
        for (std::size_t r = 0; r < positions; ++r) {
            for (std::size_t l = 0; l < r; ++l) {
                if (unused_ + 1 - fresh(l) - fresh(r) > 1) continue;
                const std::uint64_t a = nodes_[l], b = nodes_[r];
                const std::uint64_t minterm[4] = {~a & ~b, ~a & b, a & ~b, a & b};
                for (GateOp op : kGateOps) {
                    const unsigned t = static_cast<unsigned>(op);
                    std::uint64_t m = 0;
                    for (unsigned i = 0; i < 4; ++i) {
                        if ((t >> i) & 1U) m |= minterm[i];
                    }
                    table_.record(m & full_, level);
                }
            }
        }
        for (std::size_t x = 0; x < positions; ++x) {
            if (unused_ + 1 - fresh(x) > 1) continue;
            table_.record(~nodes_[x] & full_, level);
        }
    }

    void place(std::size_t d) {
        if (d == s_) return;
        if (symmetric_ && d == 0) {
            for (GateOp op : {GateOp::AND, GateOp::XOR}) {
                const std::uint64_t m = apply(op, nodes_[0], nodes_[1]) & full_;
                if (s_ == 1) {
                    table_.record(m, 1);
                } else {
                    push(0, 1, key(1, 0, static_cast<unsigned>(op)), m, 0, 1);
                }
            }
            return;
        }
        if (d + 1 == s_) {
            place_last(d);
            return;
        }
        const std::size_t positions = k_ + d;
        const std::size_t prev = positions - 1;
        const std::size_t remaining = s_ - d - 1;
        // With a fixed first gate, gates 0 and 1 are not ordered against each other.
        const std::size_t first_ordered = symmetric_ ? 2 : 1;
        for (std::size_t r = 0; r < positions; ++r) {
            for (std::size_t l = 0; l < r; ++l) {
                const std::size_t unused_after = unused_ + 1 - fresh(l) - fresh(r);
                if (unused_after > remaining + 1) continue;
                const bool independent = d >= first_ordered && l != prev && r != prev;
                const std::uint64_t a = nodes_[l], b = nodes_[r];
                const std::uint64_t minterm[4] = {~a & ~b, ~a & b, a & ~b, a & b};
                for (GateOp op : kGateOps) {
                    const unsigned t = static_cast<unsigned>(op);
                    const std::uint32_t kk = key(r, l, t);
                    if (independent && kk <= keys_.back()) continue;
                    std::uint64_t m = 0;
                    for (unsigned i = 0; i < 4; ++i) {
                        if ((t >> i) & 1U) m |= minterm[i];
                    }
                    m &= full_;
                    if (duplicate(m)) continue;
                    push(l, r, kk, m, d, unused_after);
                }
            }
        }
        for (std::size_t x = 0; x < positions; ++x) {
            const std::size_t unused_after = unused_ + 1 - fresh(x);
            if (unused_after > remaining + 1) continue;
            const std::uint32_t kk = key(x, x, kNegation);
            if (d >= first_ordered && x != prev && kk <= keys_.back()) continue;
            const std::uint64_t m = ~nodes_[x] & full_;
            if (duplicate(m)) continue;
            push(x, x, kk, m, d, unused_after);
        }
    }

    std::size_t k_, s_;
    FunctionTable& table_;
    std::uint64_t full_;
    bool symmetric_;
    std::vector<std::uint64_t> nodes_;
    std::vector<std::uint32_t> keys_;
    std::vector<unsigned> uses_;
    std::size_t unused_ = 0;
};

// Position j of the transformed table reads position src[j] of the original.
std::uint64_t permute_positions(std::uint64_t mask, const std::vector<std::size_t>& src) {
    std::uint64_t out = 0;
    for (std::size_t j = 0; j < src.size(); ++j) {
        if ((mask >> src[j]) & 1U) out |= std::uint64_t{1} << j;
    }
    return out;
}

void record_trivial(std::size_t k, FunctionTable& table) {
    const std::uint64_t full = full_mask(k);
    table.record(0, 0);
    table.record(full, 0);
    for (std::size_t i = 0; i < k; ++i) {
        table.record(projection_mask(k, i), 0);
        if (table.bound() >= 1) table.record(~projection_mask(k, i) & full, 1);
    }
}

// Closes the nontrivial functions of `raw` under the symmetry group, orbit by
// orbit in increasing level so each orbit receives its smallest level.
FunctionTable close_under_symmetry(std::size_t k, const FunctionTable& raw) {
    const std::size_t len = std::size_t{1} << k;
    const std::uint64_t full = full_mask(k);
    std::vector<std::vector<std::size_t>> generators;
    for (std::size_t v = 0; v + 1 < k; ++v) {
        // Swap variables v and v+1, i.e. bits (k-1-v) and (k-2-v) of the position.
        const std::size_t hi = k - 1 - v, lo = k - 2 - v;
        std::vector<std::size_t> src(len);
        for (std::size_t j = 0; j < len; ++j) {
            const std::size_t a = (j >> hi) & 1U, b = (j >> lo) & 1U;
            src[j] = (j & ~((std::size_t{1} << hi) | (std::size_t{1} << lo))) | (b << hi) | (a << lo);
        }
        generators.push_back(std::move(src));
    }
    {
        std::vector<std::size_t> src(len);
        for (std::size_t j = 0; j < len; ++j) src[j] = j ^ (std::size_t{1} << (k - 1));
        generators.push_back(std::move(src));
    }

    FunctionTable closed(k, raw.bound());
    record_trivial(k, closed);
    std::vector<std::pair<unsigned, std::uint64_t>> seeds;
    for (std::uint64_t m : raw.functions()) {
        if (!closed.contains(m)) seeds.emplace_back(*raw.complexity(m), m);
    }
    std::sort(seeds.begin(), seeds.end());
    std::vector<std::uint64_t> frontier;
    for (auto [level, seed] : seeds) {
        if (closed.contains(seed)) continue;
        closed.record(seed, level);
        frontier.assign(1, seed);
        while (!frontier.empty()) {
            const std::uint64_t m = frontier.back();
            frontier.pop_back();
            auto visit = [&](std::uint64_t image) {
                if (!closed.contains(image)) {
                    closed.record(image, level);
                    frontier.push_back(image);
                }
            };
            for (const auto& g : generators) visit(permute_positions(m, g));
            visit(~m & full);
        }
    }
    return closed;
}

FunctionTable search_table(std::size_t k, std::size_t s) {
    const bool symmetric = k >= 2;
    FunctionTable raw(k, s);
    record_trivial(k, raw);
    if (s > 0) ReachableSearch(k, s, raw, symmetric).run();
    return symmetric ? close_under_symmetry(k, raw) : raw;
}

// Tries to show that every function outside `exact` (complete up to its
// bound b) has complexity exactly b+1, by exhibiting each as op(g, h) with
// c(g) + c(h) + 1 <= b+1. On success returns the saturated table at b+1.
std::optional<FunctionTable> complete_by_top_gate(const FunctionTable& exact) {
    const std::size_t k = exact.arity();
    const auto b = static_cast<unsigned>(exact.bound());
    if (k > 4) return std::nullopt;
    const std::uint64_t total = std::uint64_t{1} << (std::size_t{1} << k);
    std::uint64_t missing = total - exact.count();
    FunctionTable out = exact.rebound(b + 1);
    if (missing == 0) return out;

    std::vector<std::vector<std::uint64_t>> by_level(b + 1);
    for (std::uint64_t m : exact.functions()) by_level[*exact.complexity(m)].push_back(m);
    const std::uint64_t full = full_mask(k);
    for (unsigned a = 0; a <= b && missing > 0; ++a) {
        for (std::uint64_t g : by_level[a]) {
            for (unsigned c = 0; c + a <= b && missing > 0; ++c) {
                for (std::uint64_t h : by_level[c]) {
                    for (GateOp op : kGateOps) {
                        const std::uint64_t m = apply(op, g, h) & full;
                        if (!out.contains(m)) {
                            out.record(m, b + 1);
                            --missing;
                        }
                    }
                }
            }
        }
    }
    if (missing > 0) return std::nullopt;
    return out;
}

struct TableCache {
    std::mutex mutex;
    std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const FunctionTable>> tables;
    // Per arity, the bound at which the table first became saturated.
    std::map<std::size_t, std::size_t> saturation;
};

TableCache& cache() {
    static TableCache c;
    return c;
}

}  // namespace

std::shared_ptr<const FunctionTable> reachable_functions(std::size_t arity, std::size_t max_gates,
                                                         const Limits& limits,
                                                         const std::array<std::size_t, 7>& search_cap) {
    (void)limits;
    if (arity == 0 || arity > 6) {
        throw ResourceLimitError("reachable-function search supports arity 1..6, got " +
                                 std::to_string(arity));
    }
    auto& c = cache();
    std::lock_guard lock(c.mutex);
    if (auto it = c.tables.find({arity, max_gates}); it != c.tables.end()) return it->second;

    auto saturated_answer = [&]() -> std::shared_ptr<const FunctionTable> {
        auto sat = c.saturation.find(arity);
        if (sat == c.saturation.end() || max_gates < sat->second) return nullptr;
        auto t = std::make_shared<const FunctionTable>(
            c.tables.at({arity, sat->second})->rebound(max_gates));
        c.tables[{arity, max_gates}] = t;
        return t;
    };
    if (auto t = saturated_answer()) return t;

    // Grow the bound one gate at a time so saturation is noticed as soon as
    // it happens and larger requests are answered from it.
    const std::size_t cap = search_cap[arity];
    std::shared_ptr<const FunctionTable> last;
    for (std::size_t s = 0; s <= std::min(max_gates, cap); ++s) {
        auto it = c.tables.find({arity, s});
        if (it != c.tables.end()) {
            last = it->second;
        } else {
            last = std::make_shared<const FunctionTable>(search_table(arity, s));
            c.tables[{arity, s}] = last;
        }
        if (last->saturated()) {
            c.saturation[arity] = s;
            return saturated_answer();
        }
    }
    if (max_gates <= cap) return last;

    if (auto completed = complete_by_top_gate(*last)) {
        c.tables[{arity, cap + 1}] = std::make_shared<const FunctionTable>(std::move(*completed));
        c.saturation[arity] = cap + 1;
        return saturated_answer();
    }
    throw ResourceLimitError("gate bound " + std::to_string(max_gates) + " at arity " +
                             std::to_string(arity) + " exceeds the search cap " + std::to_string(cap));
}

unsigned circuit_complexity(const TruthTable& tt, const Limits& limits) {
    const std::size_t k = tt.arity();
    if (k > limits.max_oracle_arity) {
        throw ResourceLimitError("circuit_complexity supports arity <= " +
                                 std::to_string(limits.max_oracle_arity) + ", got " + std::to_string(k));
    }
    if (k == 0) return 0;
    const std::uint64_t mask = tt.to_mask();
    const std::size_t cap = kDefaultSearchGateCap[k] + 1;
    for (std::size_t s = 0; s <= cap; ++s) {
        std::shared_ptr<const FunctionTable> table;
        try {
            table = reachable_functions(k, s, limits);
        } catch (const ResourceLimitError&) {
            break;
        }
        if (auto c = table->complexity(mask)) return *c;
        if (table->saturated()) break;
    }
    throw ResourceLimitError("complexity of " + tt.bits().str() + " exceeds the searchable bound " +
                             std::to_string(cap) + " at arity " + std::to_string(k));
}

bool complexity_exceeds(const TruthTable& tt, std::size_t threshold, const Limits& limits) {
    const std::size_t k = tt.arity();
    if (k > limits.max_oracle_arity) {
        throw ResourceLimitError("hardness certification supports arity <= " +
                                 std::to_string(limits.max_oracle_arity));
    }
    if (k == 0) return false;
    return !reachable_functions(k, threshold, limits)->contains(tt.to_mask());
}

}  // namespace hitforge::circuits
