#ifndef PLEXPLAIN_ADVICE_H
#define PLEXPLAIN_ADVICE_H

#include "dnf.h"
#include "model.h"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace plexplain {
struct TransitionLabel {
    enum class Kind {action, guard};
    Kind kind = Kind::action;
    std::string action;
    DnfFormula guard;
    // Guard fires when the formula does NOT hold.
    bool negated = false;

    static TransitionLabel on_action(std::string name) {
        return {Kind::action, std::move(name), {}, false};
    }
    static TransitionLabel on_guard(DnfFormula phi, bool negated = false) {
        return {Kind::guard, {}, std::move(phi), negated};
    }
    bool is_action() const {return kind == Kind::action;}
    friend bool operator==(const TransitionLabel &, const TransitionLabel &) = default;
};

struct FsaTransition {
    std::size_t from;
    TransitionLabel label;
    std::size_t to;
    friend bool operator==(const FsaTransition &, const FsaTransition &) = default;
};

// Nondeterministic automaton over action labels; guard transitions are
// epsilon moves that need their formula to hold in the current state.
struct ConstraintFSA {
    std::vector<std::string> states;
    std::size_t initial = 0;
    std::vector<std::size_t> accepting;
    std::vector<FsaTransition> transitions;

    std::size_t num_states() const {return states.size();}
    bool is_accepting(std::size_t s) const;
    // Throws InputError on dangling state references.
    void check() const;
    // True if some accepting state is reachable from the initial state.
    bool can_accept() const;
};

// Any action sequence; one accepting state with a self-loop per action.
ConstraintFSA universal_fsa(const PlanningModel &m);

// Templates. Looping "on every action" expands to one self-loop per model action.
ConstraintFSA never_use_action(const PlanningModel &m, const std::string &action);
ConstraintFSA use_action_eventually(const PlanningModel &m, const std::string &action);
ConstraintFSA eventually_holds(const PlanningModel &m, const DnfFormula &phi);
ConstraintFSA never_holds(const PlanningModel &m, const DnfFormula &phi);
// p holds at some point strictly before q first holds (vacuous if q never holds).
ConstraintFSA before(const PlanningModel &m, const DnfFormula &p, const DnfFormula &q);
ConstraintFSA action_count_at_most(const PlanningModel &m, const std::string &action,
                                   std::size_t k);

ConstraintFSA fsa_product(const ConstraintFSA &a, const ConstraintFSA &b);

struct ParsedAdvice {
    ConstraintFSA fsa;
    std::vector<std::string> warnings;
};

/*
  JSON list of items (or {"advice": [...]}). Each item is a template,
  {"template": name, ...} or {"type": name, ...}, with "action", "formula",
  "p"/"q" or "k" arguments, or an explicit automaton {"fsa": {"states",
  "initial", "accepting", "transitions": [{"from", "to", "label": {"action"
  | "formula", "negated"?}}]}}. Action "*" stands for every model action.
*/
ParsedAdvice parse_advice(std::string_view text, const PlanningModel &m);

// Some run over the plan (guards taken whenever they hold) ends accepting.
// Throws PreconditionError if the plan is not executable in m.
bool accepts(const ConstraintFSA &f, const Plan &plan, const PlanningModel &m);

struct MetaAction {
    enum class Kind {base, guard, accept};
    Kind kind;
    std::string base_action;   // empty for guard and accept steps
    std::size_t from = 0;
    std::size_t to = 0;
};

struct ConstrainedModel {
    PlanningModel base;
    ConstraintFSA fsa;
    PlanningModel compiled;
    std::map<std::string, MetaAction> meta_action_map;
    std::vector<FluentId> in_state;   // indexed by automaton state
    FluentId goal_accept;
};

ConstrainedModel compose(const PlanningModel &m, const ConstraintFSA &f);

// Throws InputError if the plan is not valid in the compiled model.
Plan strip_meta(const ConstrainedModel &cm, const Plan &plan);

// Guard formula as seen by a model: literals over inactive fluents drop out.
DnfFormula effective_guard(const TransitionLabel &label, const FluentSet &active);
bool guard_holds(const TransitionLabel &label, const State &s, const FluentSet &active);
}

#endif
