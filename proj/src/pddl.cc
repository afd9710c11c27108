#include "plexplain/pddl.h"

#include "plexplain/errors.h"

#include <algorithm>
#include <functional>
#include <sstream>

using namespace std;

namespace plexplain {
bool LiftedModel::is_subtype(const string &type, const string &ancestor) const {
    if (ancestor == "object")
        return true;
    string current = type;
    for (size_t guard = 0; guard <= type_parent.size(); ++guard) {
        if (current == ancestor)
            return true;
        auto it = type_parent.find(current);
        if (it == type_parent.end())
            return false;
        current = it->second;
    }
    return false;
}

vector<string> LiftedModel::objects_of_type(const string &type) const {
    vector<string> result;
    for (const string &obj : object_order)
        if (is_subtype(object_types.at(obj), type))
            result.push_back(obj);
    return result;
}

namespace {
const SExpr &expect_list(const SExpr &e, const string &what) {
    if (!e.is_list)
        fail_at(e, "expected " + what);
    return e;
}

const string &expect_symbol(const SExpr &e, const string &what) {
    if (e.is_list)
        fail_at(e, "expected " + what);
    return e.symbol;
}

// "a b - t c" -> [(a,t), (b,t), (c,object)]
vector<pair<TypedName, const SExpr *>> parse_typed_list(const vector<SExpr> &items,
                                                        size_t start) {
    vector<pair<TypedName, const SExpr *>> result;
    vector<pair<string, const SExpr *>> pending;
    for (size_t i = start; i < items.size(); ++i) {
        const SExpr &item = items[i];
        if (item.is_symbol("-")) {
            if (i + 1 >= items.size())
                fail_at(item, "missing type after '-'");
            const SExpr &type = items[i + 1];
            if (type.is_form("either"))
                fail_at(type, "either-types are not supported");
            const string &name = expect_symbol(type, "type name");
            for (auto &[p, where] : pending)
                result.push_back({{p, name}, where});
            pending.clear();
            ++i;
        } else {
            pending.push_back({expect_symbol(item, "name"), &item});
        }
    }
    for (auto &[p, where] : pending)
        result.push_back({{p, "object"}, where});
    return result;
}

class ModelParser {
    LiftedModel &model;

    void check_type(const string &type, const SExpr &where) {
        if (type != "object" && !model.type_parent.count(type))
            fail_at(where, "undeclared type " + type);
    }

    LiftedAtom parse_atom(const SExpr &e, const set<string> *variables) {
        expect_list(e, "atom");
        if (e.items.empty())
            fail_at(e, "empty atom");
        LiftedAtom atom;
        atom.predicate = expect_symbol(e.items[0], "predicate name");
        for (size_t i = 1; i < e.items.size(); ++i) {
            const string &term = expect_symbol(e.items[i], "term");
            if (term.starts_with("?")) {
                if (!variables || !variables->count(term))
                    fail_at(e.items[i], "unbound variable " + term);
            } else if (!model.object_types.count(term)) {
                fail_at(e.items[i], "undeclared object " + term);
            }
            atom.terms.push_back(term);
        }
        if (atom.predicate == "=") {
            if (atom.terms.size() != 2)
                fail_at(e, "equality needs exactly two arguments");
            return atom;
        }
        auto it = model.predicates.find(atom.predicate);
        if (it == model.predicates.end())
            fail_at(e, "undeclared predicate " + atom.predicate);
        if (it->second.param_types.size() != atom.terms.size())
            fail_at(e, "arity mismatch for " + atom.predicate + ": expected " +
                    std::to_string(it->second.param_types.size()) + ", got " +
                    std::to_string(atom.terms.size()));
        return atom;
    }

    LiftedLiteral parse_literal(const SExpr &e, const set<string> *variables) {
        if (e.is_form("not")) {
            if (e.items.size() != 2)
                fail_at(e, "not takes exactly one argument");
            return {parse_atom(e.items[1], variables), false};
        }
        if (e.is_form("or") || e.is_form("imply") || e.is_form("exists") ||
            e.is_form("forall"))
            fail_at(e, "unsupported connective " + e.items[0].symbol);
        return {parse_atom(e, variables), true};
    }

    void parse_conjunction(const SExpr &e, const set<string> *variables,
                           vector<LiftedLiteral> &out) {
        expect_list(e, "formula");
        if (e.is_form("and")) {
            for (size_t i = 1; i < e.items.size(); ++i)
                parse_conjunction(e.items[i], variables, out);
            return;
        }
        if (e.items.empty())
            return;
        out.push_back(parse_literal(e, variables));
    }

    void parse_simple_effect(const SExpr &e, const set<string> &variables,
                             LiftedEffect &out) {
        expect_list(e, "effect");
        if (e.is_form("and")) {
            for (size_t i = 1; i < e.items.size(); ++i)
                parse_simple_effect(e.items[i], variables, out);
            return;
        }
        if (e.items.empty())
            return;
        if (e.is_form("when") || e.is_form("forall"))
            fail_at(e, "nested " + e.items[0].symbol + " is not supported");
        LiftedLiteral lit = parse_literal(e, &variables);
        if (lit.atom.predicate == "=")
            fail_at(e, "equality cannot be an effect");
        (lit.positive ? out.adds : out.dels).push_back(lit.atom);
    }

    void parse_effect(const SExpr &e, const set<string> &variables,
                      vector<LiftedEffect> &effects) {
        expect_list(e, "effect");
        if (e.is_form("and")) {
            for (size_t i = 1; i < e.items.size(); ++i)
                parse_effect(e.items[i], variables, effects);
            return;
        }
        if (e.is_form("when")) {
            if (e.items.size() != 3)
                fail_at(e, "when takes a condition and an effect");
            LiftedEffect conditional;
            parse_conjunction(e.items[1], &variables, conditional.condition);
            parse_simple_effect(e.items[2], variables, conditional);
            effects.push_back(move(conditional));
            return;
        }
        if (e.is_form("forall"))
            fail_at(e, "forall effects are not supported");
        parse_simple_effect(e, variables, effects.front());
    }

    void parse_action(const SExpr &e) {
        ActionSchema schema;
        if (e.items.size() < 2)
            fail_at(e, "action needs a name");
        schema.name = expect_symbol(e.items[1], "action name");
        for (const ActionSchema &other : model.schemas)
            if (other.name == schema.name)
                fail_at(e.items[1], "duplicate action " + schema.name);
        set<string> variables;
        schema.effects.emplace_back();
        for (size_t i = 2; i < e.items.size(); i += 2) {
            const string &key = expect_symbol(e.items[i], "action keyword");
            if (i + 1 >= e.items.size())
                fail_at(e.items[i], "missing value for " + key);
            const SExpr &value = e.items[i + 1];
            if (key == ":parameters") {
                expect_list(value, "parameter list");
                for (auto &[param, where] : parse_typed_list(value.items, 0)) {
                    if (!param.name.starts_with("?"))
                        fail_at(*where, "parameter must start with '?'");
                    check_type(param.type, *where);
                    variables.insert(param.name);
                    schema.parameters.push_back(param);
                }
            } else if (key == ":precondition") {
                parse_conjunction(value, &variables, schema.precondition);
            } else if (key == ":effect") {
                parse_effect(value, variables, schema.effects);
            } else {
                fail_at(e.items[i], "unknown action keyword " + key);
            }
        }
        model.schemas.push_back(move(schema));
    }

    void add_objects(const SExpr &section) {
        for (auto &[obj, where] : parse_typed_list(section.items, 1)) {
            check_type(obj.type, *where);
            if (!model.object_types.count(obj.name))
                model.object_order.push_back(obj.name);
            model.object_types[obj.name] = obj.type;
        }
    }

public:
    explicit ModelParser(LiftedModel &model) : model(model) {}

    void parse_domain(const SExpr &root) {
        if (!root.is_form("define") || root.items.size() < 2 || !root.items[1].is_form("domain"))
            fail_at(root, "expected (define (domain ...) ...)");
        const SExpr &header = root.items[1];
        if (header.items.size() != 2)
            fail_at(header, "domain needs a name");
        model.domain_name = expect_symbol(header.items[1], "domain name");
        vector<const SExpr *> actions;
        for (size_t i = 2; i < root.items.size(); ++i) {
            const SExpr &section = expect_list(root.items[i], "domain section");
            if (section.items.empty())
                fail_at(section, "empty section");
            const string &key = expect_symbol(section.items[0], "section keyword");
            if (key == ":requirements") {
                for (size_t j = 1; j < section.items.size(); ++j) {
                    const string &req = expect_symbol(section.items[j], "requirement");
                    static const set<string> supported = {
                        ":strips", ":typing", ":negative-preconditions",
                        ":conditional-effects", ":equality"};
                    if (!supported.count(req))
                        fail_at(section.items[j], "unsupported requirement " + req);
                    model.requirements.insert(req);
                }
            } else if (key == ":types") {
                auto types = parse_typed_list(section.items, 1);
                for (auto &[t, where] : types)
                    model.type_parent[t.name] = t.type;
                // A parent that is never declared itself derives from object.
                for (auto &[t, where] : types)
                    if (t.type != "object" && !model.type_parent.count(t.type))
                        model.type_parent[t.type] = "object";
                for (auto &[t, where] : types) {
                    string up = t.type;
                    for (size_t steps = 0; up != "object"; ++steps) {
                        if (up == t.name || steps > model.type_parent.size())
                            fail_at(*where, "type hierarchy has a cycle through " + t.name);
                        up = model.type_parent.at(up);
                    }
                }
            } else if (key == ":constants") {
                add_objects(section);
            } else if (key == ":predicates") {
                for (size_t j = 1; j < section.items.size(); ++j) {
                    const SExpr &p = expect_list(section.items[j], "predicate declaration");
                    if (p.items.empty())
                        fail_at(p, "empty predicate declaration");
                    PredicateDecl decl;
                    decl.name = expect_symbol(p.items[0], "predicate name");
                    for (auto &[param, where] : parse_typed_list(p.items, 1)) {
                        check_type(param.type, *where);
                        decl.param_types.push_back(param.type);
                    }
                    model.predicates[decl.name] = decl;
                }
            } else if (key == ":action") {
                actions.push_back(&section);
            } else {
                fail_at(section, "unsupported domain section " + key);
            }
        }
        for (const SExpr *a : actions)
            parse_action(*a);
    }

    void parse_problem(const SExpr &root) {
        if (!root.is_form("define") || root.items.size() < 2 || !root.items[1].is_form("problem"))
            fail_at(root, "expected (define (problem ...) ...)");
        const SExpr &header = root.items[1];
        if (header.items.size() != 2)
            fail_at(header, "problem needs a name");
        model.problem_name = expect_symbol(header.items[1], "problem name");
        const SExpr *init = nullptr;
        const SExpr *goal = nullptr;
        for (size_t i = 2; i < root.items.size(); ++i) {
            const SExpr &section = expect_list(root.items[i], "problem section");
            if (section.items.empty())
                fail_at(section, "empty section");
            const string &key = expect_symbol(section.items[0], "section keyword");
            if (key == ":domain") {
                if (section.items.size() != 2 ||
                    expect_symbol(section.items[1], "domain name") != model.domain_name)
                    fail_at(section, "problem refers to a different domain");
            } else if (key == ":objects") {
                add_objects(section);
            } else if (key == ":init") {
                init = &section;
            } else if (key == ":goal") {
                goal = &section;
            } else {
                fail_at(section, "unsupported problem section " + key);
            }
        }
        if (init) {
            for (size_t i = 1; i < init->items.size(); ++i) {
                LiftedAtom atom = parse_atom(init->items[i], nullptr);
                if (atom.predicate == "=")
                    fail_at(init->items[i], "equality in :init");
                model.init.push_back(move(atom));
            }
        }
        if (goal) {
            if (goal->items.size() != 2)
                fail_at(*goal, ":goal takes one formula");
            parse_conjunction(goal->items[1], nullptr, model.goal);
        }
    }
};

using AtomKey = pair<string, vector<string>>;

struct GroundLiteral {
    AtomKey atom;
    bool positive;
};

struct GroundEffect {
    vector<GroundLiteral> condition;
    vector<AtomKey> adds;
    vector<AtomKey> dels;
};

struct GroundAction {
    string name;
    vector<GroundLiteral> prec;
    vector<GroundEffect> effects;
};

AtomKey substitute(const LiftedAtom &atom, const map<string, string> &binding) {
    AtomKey key{atom.predicate, {}};
    for (const string &t : atom.terms)
        key.second.push_back(t.starts_with("?") ? binding.at(t) : t);
    return key;
}

// Returns false if an equality literal is violated.
bool ground_literals(const vector<LiftedLiteral> &lits, const map<string, string> &binding,
                     vector<GroundLiteral> &out) {
    for (const LiftedLiteral &lit : lits) {
        AtomKey key = substitute(lit.atom, binding);
        if (key.first == "=") {
            bool equal = key.second[0] == key.second[1];
            if (equal != lit.positive)
                return false;
            continue;
        }
        out.push_back({move(key), lit.positive});
    }
    return true;
}

bool contradictory(const vector<GroundLiteral> &lits) {
    set<AtomKey> pos, neg;
    for (const GroundLiteral &l : lits)
        (l.positive ? pos : neg).insert(l.atom);
    for (const AtomKey &k : pos)
        if (neg.count(k))
            return true;
    return false;
}
}

LiftedModel parse_model(string_view domain_text, string_view problem_text) {
    LiftedModel model;
    ModelParser parser(model);
    parser.parse_domain(parse_single_sexpr(domain_text));
    parser.parse_problem(parse_single_sexpr(problem_text));
    return model;
}

PlanningModel ground(const LiftedModel &lifted) {
    vector<GroundAction> actions;
    for (const ActionSchema &schema : lifted.schemas) {
        vector<vector<string>> candidates;
        for (const TypedName &p : schema.parameters)
            candidates.push_back(lifted.objects_of_type(p.type));
        map<string, string> binding;
        vector<string> args;
        function<void(size_t)> bind = [&](size_t k) {
            if (k == schema.parameters.size()) {
                GroundAction a;
                a.name = schema.name;
                for (const string &arg : args)
                    a.name += "_" + arg;
                if (!ground_literals(schema.precondition, binding, a.prec) ||
                    contradictory(a.prec))
                    return;
                for (const LiftedEffect &le : schema.effects) {
                    GroundEffect ge;
                    if (!ground_literals(le.condition, binding, ge.condition) ||
                        contradictory(ge.condition))
                        continue;
                    for (const LiftedAtom &atom : le.adds)
                        ge.adds.push_back(substitute(atom, binding));
                    for (const LiftedAtom &atom : le.dels)
                        ge.dels.push_back(substitute(atom, binding));
                    a.effects.push_back(move(ge));
                }
                actions.push_back(move(a));
                return;
            }
            for (const string &obj : candidates[k]) {
                binding[schema.parameters[k].name] = obj;
                args.push_back(obj);
                bind(k + 1);
                args.pop_back();
            }
        };
        bind(0);
    }

    vector<GroundLiteral> goal;
    map<string, string> no_binding;
    if (!ground_literals(lifted.goal, no_binding, goal) || contradictory(goal))
        throw InputError("goal is statically false");

    set<AtomKey> atoms;
    set<AtomKey> negated;
    auto note_literals = [&](const vector<GroundLiteral> &lits) {
        for (const GroundLiteral &l : lits) {
            atoms.insert(l.atom);
            if (!l.positive)
                negated.insert(l.atom);
        }
    };
    for (const LiftedAtom &atom : lifted.init)
        atoms.insert(substitute(atom, no_binding));
    note_literals(goal);
    for (const GroundAction &a : actions) {
        note_literals(a.prec);
        for (const GroundEffect &e : a.effects) {
            note_literals(e.condition);
            atoms.insert(e.adds.begin(), e.adds.end());
            atoms.insert(e.dels.begin(), e.dels.end());
        }
    }

    auto table = make_shared<FluentTable>();
    for (const AtomKey &k : atoms)
        table->intern(k.first, k.second);
    map<AtomKey, FluentId> complement;
    for (const AtomKey &k : negated)
        complement[k] = table->intern("not-" + k.first, k.second);
    auto id_of = [&](const AtomKey &k) {return *table->find(k.first, k.second);};
    auto literal_ids = [&](const vector<GroundLiteral> &lits) {
        vector<FluentId> ids;
        for (const GroundLiteral &l : lits)
            ids.push_back(l.positive ? id_of(l.atom) : complement.at(l.atom));
        return ids;
    };

    size_t n = table->size();
    FluentSet all(n);
    for (FluentId id = 0; id < n; ++id)
        all.insert(id);
    State init(n);
    set<AtomKey> init_atoms;
    for (const LiftedAtom &atom : lifted.init)
        init_atoms.insert(substitute(atom, no_binding));
    for (const AtomKey &k : init_atoms)
        init.insert(id_of(k));
    for (const auto &[k, id] : complement)
        if (!init_atoms.count(k))
            init.insert(id);

    vector<Action> grounded;
    for (const GroundAction &ga : actions) {
        Action a;
        a.name = ga.name;
        a.prec = literal_ids(ga.prec);
        for (const GroundEffect &ge : ga.effects) {
            ConditionalEffect e;
            e.condition = literal_ids(ge.condition);
            set<AtomKey> added(ge.adds.begin(), ge.adds.end());
            for (const AtomKey &k : ge.adds) {
                e.adds.push_back(id_of(k));
                auto c = complement.find(k);
                if (c != complement.end())
                    e.dels.push_back(c->second);
            }
            for (const AtomKey &k : ge.dels) {
                if (added.count(k))
                    continue;
                e.dels.push_back(id_of(k));
                auto c = complement.find(k);
                if (c != complement.end())
                    e.adds.push_back(c->second);
            }
            a.effects.push_back(move(e));
        }
        grounded.push_back(move(a));
    }
    return PlanningModel(table, all, move(grounded), init, literal_ids(goal));
}

PlanningModel load_model(string_view domain_text, string_view problem_text) {
    return ground(parse_model(domain_text, problem_text));
}

RawFormula parse_formula(const SExpr &e, const FluentTable &table) {
    if (e.is_symbol()) {
        auto id = table.find_display(e.symbol);
        if (!id)
            fail_at(e, "unknown fluent " + e.symbol);
        return RawFormula::make_atom(*id);
    }
    if (e.items.empty())
        fail_at(e, "empty formula");
    if (e.is_form("and") || e.is_form("or")) {
        vector<RawFormula> children;
        for (size_t i = 1; i < e.items.size(); ++i)
            children.push_back(parse_formula(e.items[i], table));
        return e.is_form("and") ? RawFormula::make_and(move(children))
                                : RawFormula::make_or(move(children));
    }
    if (e.is_form("not")) {
        if (e.items.size() != 2)
            fail_at(e, "not takes exactly one argument");
        return RawFormula::make_not(parse_formula(e.items[1], table));
    }
    string name = expect_symbol(e.items[0], "predicate name");
    vector<string> args;
    for (size_t i = 1; i < e.items.size(); ++i)
        args.push_back(expect_symbol(e.items[i], "object name"));
    auto id = table.find(name, args);
    if (!id)
        fail_at(e, "unknown fluent " + e.to_string());
    return RawFormula::make_atom(*id);
}

RawFormula parse_formula(string_view text, const FluentTable &table) {
    return parse_formula(parse_single_sexpr(text), table);
}

string pddl_name(const string &raw) {
    string out;
    for (char c : raw) {
        unsigned char u = static_cast<unsigned char>(c);
        if (isalnum(u) || c == '-' || c == '_')
            out += static_cast<char>(tolower(u));
        else
            out += '_';
    }
    if (out.empty() || !isalpha(static_cast<unsigned char>(out[0])))
        out = "f_" + out;
    return out;
}

static string atoms_conjunction(const PlanningModel &m, const vector<FluentId> &ids,
                                const vector<FluentId> &negated = {}) {
    ostringstream out;
    out << "(and";
    for (FluentId id : ids)
        out << " (" << pddl_name(m.name(id)) << ")";
    for (FluentId id : negated)
        out << " (not (" << pddl_name(m.name(id)) << "))";
    out << ")";
    return out.str();
}

PddlText write_pddl(const PlanningModel &m, const string &name) {
    string domain_name = pddl_name(name);
    set<string> used;
    for (FluentId id : m.fluents().to_vector())
        if (!used.insert(pddl_name(m.name(id))).second)
            throw InputError("fluent names collide after sanitizing: " + m.name(id));
    ostringstream d;
    d << "(define (domain " << domain_name << ")\n";
    d << "  (:requirements :strips :conditional-effects)\n";
    d << "  (:predicates";
    for (FluentId id : m.fluents().to_vector())
        d << "\n    (" << pddl_name(m.name(id)) << ")";
    d << ")\n";
    set<string> action_names;
    for (const Action &a : m.actions()) {
        string an = pddl_name(a.name);
        if (!action_names.insert(an).second)
            throw InputError("action names collide after sanitizing: " + a.name);
        d << "  (:action " << an << "\n";
        d << "    :parameters ()\n";
        d << "    :precondition " << atoms_conjunction(m, a.prec) << "\n";
        d << "    :effect (and";
        for (const ConditionalEffect &e : a.effects) {
            string body = atoms_conjunction(m, e.adds, e.dels);
            if (e.condition.empty())
                d << " " << body;
            else
                d << "\n      (when " << atoms_conjunction(m, e.condition) << " " << body << ")";
        }
        d << "))\n";
    }
    d << ")\n";

    ostringstream p;
    p << "(define (problem " << domain_name << "-problem)\n";
    p << "  (:domain " << domain_name << ")\n";
    p << "  (:init";
    for (FluentId id : m.init().to_vector())
        p << " (" << pddl_name(m.name(id)) << ")";
    p << ")\n";
    p << "  (:goal " << atoms_conjunction(m, m.goal()) << "))\n";
    return {d.str(), p.str()};
}
}
