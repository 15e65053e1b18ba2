#include "fsel/compatibility.hpp"

#include <numeric>

#include "fsel/error.hpp"

namespace fsel {

std::string_view to_string(ViolationKind k) noexcept {
    switch (k) {
        case ViolationKind::IotaClash: return "IotaClash";
        case ViolationKind::EtaClash: return "EtaClash";
        case ViolationKind::ForbiddenStep: return "ForbiddenStep";
        case ViolationKind::KeepMismatch: return "KeepMismatch";
        case ViolationKind::MissingDeclaration: return "MissingDeclaration";
    }
    return "?";
}

std::string transition_label(const Automaton& a, StateId p, Symbol sym, StateId q) {
    return a.state_name(p) + "-" + a.alphabet().token(sym) + "->" + a.state_name(q);
}

IotaInference infer_iota(const Automaton& a, const Declarations& declared) {
    const auto& tok = [&](Symbol s) -> const std::string& { return a.alphabet().token(s); };
    IotaInference out;
    out.iota.assign(a.num_states(), std::nullopt);
    std::vector<bool> clashed(a.num_states(), false);
    for (const auto& e : a.edges()) {
        auto& label = out.iota[e.target];
        if (!label) {
            label = e.symbol;
        } else if (*label != e.symbol && !clashed[e.target]) {
            clashed[e.target] = true;
            out.violations.push_back({ViolationKind::IotaClash, a.state_name(e.target),
                                      "incoming labels " + tok(*label) + " and " + tok(e.symbol)});
        }
    }
    for (StateId q = 0; q < a.num_states(); ++q) {
        const auto decl = declared.iota.find(q);
        if (out.iota[q]) {
            if (decl != declared.iota.end() && decl->second != *out.iota[q] && !clashed[q])
                out.violations.push_back({ViolationKind::IotaClash, a.state_name(q),
                                          "declared " + tok(decl->second) + " but incoming label is " + tok(*out.iota[q])});
        } else if (decl != declared.iota.end()) {
            out.iota[q] = decl->second;
        } else {
            out.violations.push_back({ViolationKind::MissingDeclaration, a.state_name(q),
                                      "no incoming transition and no iota declaration"});
        }
    }
    return out;
}

namespace {

void check_steps(const Automaton& a, const MarkovMeasure& mu, const std::vector<std::optional<Symbol>>& iota,
                 std::vector<Violation>& violations) {
    for (const auto& e : a.edges()) {
        if (!iota[e.source]) continue;
        const Symbol last = *iota[e.source];
        if (!(mu.p(last, e.symbol) > 0.0)) {
            const auto& tok = a.alphabet().tokens();
            violations.push_back({ViolationKind::ForbiddenStep, transition_label(a, e.source, e.symbol, e.target),
                                  "P(" + tok[last] + "," + tok[e.symbol] + ")=0 with iota(" + a.state_name(e.source) +
                                      ")=" + tok[last]});
        }
    }
}

std::vector<Symbol> totalize(const std::vector<std::optional<Symbol>>& labels) {
    std::vector<Symbol> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(*l);
    return out;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    /// Returns the surviving root.
    std::size_t unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
        return a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

CompatibilityResult check_automaton_compatibility(const Automaton& a, const MarkovMeasure& mu,
                                                  const Declarations& declared) {
    if (!(a.alphabet() == mu.alphabet())) throw ValidationError("machine and measure use different alphabets");
    auto inference = infer_iota(a, declared);
    CompatibilityResult result;
    result.violations = std::move(inference.violations);
    check_steps(a, mu, inference.iota, result.violations);
    if (result.violations.empty()) result.witness = CompatibilityWitness{totalize(inference.iota), {}, {}};
    return result;
}

CompatibilityResult check_selector_compatibility(const Selector& s, const MarkovMeasure& mu,
                                                 const Declarations& declared) {
    const Automaton& a = s.automaton();
    if (!(a.alphabet() == mu.alphabet())) throw ValidationError("machine and measure use different alphabets");
    const auto& tok = a.alphabet().tokens();
    auto inference = infer_iota(a, declared);
    CompatibilityResult result;
    result.violations = std::move(inference.violations);
    check_steps(a, mu, inference.iota, result.violations);

    const std::size_t n = a.num_states();
    UnionFind classes(n);
    for (StateId p = 0; p < n; ++p)
        for (Symbol sym = 0; sym < tok.size(); ++sym)
            if (const auto step = s.next(p, sym); step && step->action == Action::Drop) classes.unite(p, step->target);

    // Anchors per class root, with the constraint that first fixed them.
    std::vector<std::optional<Symbol>> anchor(n);
    std::vector<std::string> anchor_source(n);
    std::vector<bool> clash_reported(n, false);
    const auto pin = [&](StateId q, Symbol value, ViolationKind kind, const std::string& why) {
        const std::size_t root = classes.find(q);
        if (!anchor[root]) {
            anchor[root] = value;
            anchor_source[root] = why;
        } else if (*anchor[root] != value && !clash_reported[root]) {
            clash_reported[root] = true;
            result.violations.push_back({kind, a.state_name(q),
                                         why + " forces eta=" + tok[value] + " but " + anchor_source[root] +
                                             " forces eta=" + tok[*anchor[root]]});
        }
    };

    for (StateId p = 0; p < n; ++p)
        for (Symbol sym = 0; sym < tok.size(); ++sym)
            if (const auto step = s.next(p, sym); step && step->action == Action::Keep)
                pin(step->target, sym, ViolationKind::EtaClash,
                    "keep " + transition_label(a, p, sym, step->target));
    for (const auto& [q, value] : declared.eta)
        pin(q, value, ViolationKind::EtaClash, "declaration of " + a.state_name(q));
    for (StateId p = 0; p < n; ++p) {
        if (s.state_action(p) != Action::Keep && !s.mixed(p)) continue;
        if (!inference.iota[p]) continue;
        pin(p, *inference.iota[p], ViolationKind::KeepMismatch,
            "selection from " + a.state_name(p) + " with iota=" + tok[*inference.iota[p]]);
    }

    if (!result.violations.empty()) return result;

    CompatibilityWitness witness;
    witness.iota = totalize(inference.iota);
    witness.eta.resize(n);
    for (StateId q = 0; q < n; ++q) {
        const std::size_t root = classes.find(q);
        if (anchor[root]) {
            witness.eta[q] = *anchor[root];
        } else {
            // Whole class is free; DROP edges still force one shared value.
            witness.eta[q] = witness.iota[root];
            witness.unconstrained_eta.push_back(q);
        }
    }
    result.witness = std::move(witness);
    return result;
}

ShiftCompleteness is_shift_complete(const Automaton& a, const MarkovMeasure& mu, const std::vector<Symbol>& iota) {
    ShiftCompleteness out;
    for (StateId p = 0; p < a.num_states(); ++p)
        for (Symbol sym = 0; sym < a.alphabet().size(); ++sym)
            if (mu.p(iota.at(p), sym) > 0.0 && !a.next(p, sym)) {
                out.complete = false;
                out.missing.emplace_back(p, sym);
            }
    return out;
}

}  // namespace fsel
