#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsel/automaton.hpp"
#include "fsel/measures.hpp"

namespace fsel {

/// Optional per-state labels from `iota` / `eta` file declarations.
struct Declarations {
    std::map<StateId, Symbol> iota;
    std::map<StateId, Symbol> eta;
};

enum class ViolationKind { IotaClash, EtaClash, ForbiddenStep, KeepMismatch, MissingDeclaration };

std::string_view to_string(ViolationKind k) noexcept;

struct Violation {
    ViolationKind kind;
    /// State name, or "src-sym->dst" for a transition.
    std::string location;
    std::string detail;
};

/// iota(q) is the last symbol read on entering q; eta(q) the last selected one.
struct CompatibilityWitness {
    std::vector<Symbol> iota;
    std::vector<Symbol> eta;  // empty for plain automata
    /// States whose eta no selection constrains; they default to iota.
    std::vector<StateId> unconstrained_eta;
};

struct CompatibilityResult {
    std::optional<CompatibilityWitness> witness;
    std::vector<Violation> violations;

    bool compatible() const noexcept { return witness.has_value(); }
};

struct IotaInference {
    std::vector<std::optional<Symbol>> iota;
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// States with incoming transitions take the common incoming label;
/// source-only states take their declaration. Declarations on states with
/// incoming transitions are only checked for agreement.
IotaInference infer_iota(const Automaton& a, const Declarations& declared);

CompatibilityResult check_automaton_compatibility(const Automaton& a, const MarkovMeasure& mu,
                                                  const Declarations& declared);

/// eta is inferred by union-find: DROP edges merge classes, KEEP targets and
/// KEEP sources anchor them. All violations are collected.
CompatibilityResult check_selector_compatibility(const Selector& s, const MarkovMeasure& mu,
                                                 const Declarations& declared);

struct ShiftCompleteness {
    bool complete = true;
    std::vector<std::pair<StateId, Symbol>> missing;
};

/// Every (p, a) with P_{iota(p) a} > 0 has an outgoing transition.
ShiftCompleteness is_shift_complete(const Automaton& a, const MarkovMeasure& mu, const std::vector<Symbol>& iota);

/// Formats a transition as "src-sym->dst".
std::string transition_label(const Automaton& a, StateId p, Symbol sym, StateId q);

}  // namespace fsel
