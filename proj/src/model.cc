#include "plexplain/model.h"

#include "plexplain/errors.h"

#include <algorithm>
#include <bit>
#include <sstream>

using namespace std;

namespace plexplain {
static const string complement_prefix = "not-";

string Fluent::base_predicate() const {
    if (is_complement())
        return name.substr(complement_prefix.size());
    return name;
}

bool Fluent::is_complement() const {
    return name.size() > complement_prefix.size() &&
           name.compare(0, complement_prefix.size(), complement_prefix) == 0;
}

string Fluent::display() const {
    string result = name;
    for (const string &arg : args)
        result += "_" + arg;
    return result;
}

FluentId FluentTable::intern(const string &name, const vector<string> &args) {
    auto key = make_pair(name, args);
    auto it = index.find(key);
    if (it != index.end())
        return it->second;
    FluentId id = static_cast<FluentId>(fluents.size());
    fluents.push_back({name, args});
    index.emplace(move(key), id);
    display_cache.push_back(fluents.back().display());
    display_index.emplace(display_cache.back(), id);
    return id;
}

optional<FluentId> FluentTable::find(const string &name, const vector<string> &args) const {
    auto it = index.find(make_pair(name, args));
    if (it == index.end())
        return nullopt;
    return it->second;
}

optional<FluentId> FluentTable::find_display(string_view display) const {
    auto it = display_index.find(string(display));
    if (it == display_index.end())
        return nullopt;
    return it->second;
}

FluentSet::FluentSet(size_t universe_size)
    : words((universe_size + 63) / 64, 0), universe(universe_size) {
}

FluentSet::FluentSet(size_t universe_size, const vector<FluentId> &members)
    : FluentSet(universe_size) {
    for (FluentId id : members)
        insert(id);
}

bool FluentSet::contains_all(const vector<FluentId> &ids) const {
    for (FluentId id : ids)
        if (!contains(id))
            return false;
    return true;
}

bool FluentSet::is_subset_of(const FluentSet &other) const {
    for (size_t i = 0; i < words.size(); ++i) {
        uint64_t theirs = i < other.words.size() ? other.words[i] : 0;
        if (words[i] & ~theirs)
            return false;
    }
    return true;
}

bool FluentSet::empty() const {
    return all_of(words.begin(), words.end(), [](uint64_t w) {return w == 0;});
}

size_t FluentSet::count() const {
    size_t n = 0;
    for (uint64_t w : words)
        n += popcount(w);
    return n;
}

vector<FluentId> FluentSet::to_vector() const {
    vector<FluentId> result;
    for (size_t i = 0; i < words.size(); ++i) {
        uint64_t w = words[i];
        while (w) {
            int bit = countr_zero(w);
            result.push_back(static_cast<FluentId>(i * 64 + bit));
            w &= w - 1;
        }
    }
    return result;
}

FluentSet FluentSet::resized(size_t universe_size) const {
    FluentSet result(universe_size);
    for (FluentId id : to_vector())
        if (id < universe_size)
            result.insert(id);
    return result;
}

FluentSet &FluentSet::operator|=(const FluentSet &other) {
    for (size_t i = 0; i < words.size() && i < other.words.size(); ++i)
        words[i] |= other.words[i];
    return *this;
}

FluentSet &FluentSet::operator-=(const FluentSet &other) {
    for (size_t i = 0; i < words.size() && i < other.words.size(); ++i)
        words[i] &= ~other.words[i];
    return *this;
}

FluentSet &FluentSet::operator&=(const FluentSet &other) {
    for (size_t i = 0; i < words.size(); ++i)
        words[i] &= i < other.words.size() ? other.words[i] : 0;
    return *this;
}

size_t FluentSet::hash() const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (uint64_t w : words) {
        h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
}

string to_string(const Plan &plan) {
    string result = "[";
    for (size_t i = 0; i < plan.actions.size(); ++i) {
        if (i)
            result += ", ";
        result += plan.actions[i];
    }
    return result + "]";
}

vector<FluentId> sorted_unique(vector<FluentId> ids) {
    sort(ids.begin(), ids.end());
    ids.erase(unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

string join_names(const PlanningModel &m, const vector<FluentId> &ids, const string &sep) {
    string result;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i)
            result += sep;
        result += m.name(ids[i]);
    }
    return result;
}

static void check_ids(const FluentSet &fluents, const vector<FluentId> &ids,
                      const string &where) {
    for (FluentId id : ids)
        if (!fluents.contains(id))
            throw InputError("fluent id " + std::to_string(id) + " in " + where +
                             " is not part of the model");
}

PlanningModel::PlanningModel(shared_ptr<const FluentTable> table, FluentSet fluents,
                             vector<Action> actions, State init, vector<FluentId> goal)
    : table_(move(table)), fluents_(move(fluents)), actions_(move(actions)),
      init_(move(init)), goal_(sorted_unique(move(goal))) {
    if (!table_)
        throw InputError("planning model needs a fluent table");
    if (fluents_.universe_size() != table_->size())
        fluents_ = fluents_.resized(table_->size());
    if (init_.universe_size() != table_->size())
        init_ = init_.resized(table_->size());
    if (!init_.is_subset_of(fluents_))
        throw InputError("initial state mentions fluents outside the model");
    check_ids(fluents_, goal_, "goal");
    for (size_t i = 0; i < actions_.size(); ++i) {
        Action &a = actions_[i];
        a.prec = sorted_unique(move(a.prec));
        check_ids(fluents_, a.prec, "precondition of " + a.name);
        for (ConditionalEffect &e : a.effects) {
            e.condition = sorted_unique(move(e.condition));
            e.adds = sorted_unique(move(e.adds));
            e.dels = sorted_unique(move(e.dels));
            // Within one effect an add overrides a delete of the same fluent.
            vector<FluentId> dels;
            set_difference(e.dels.begin(), e.dels.end(), e.adds.begin(), e.adds.end(),
                           back_inserter(dels));
            e.dels = move(dels);
            check_ids(fluents_, e.condition, "effect condition of " + a.name);
            check_ids(fluents_, e.adds, "add effect of " + a.name);
            check_ids(fluents_, e.dels, "delete effect of " + a.name);
        }
        if (!action_index.emplace(a.name, i).second)
            throw InputError("duplicate action name " + a.name);
    }
}

optional<size_t> PlanningModel::find_action(string_view name) const {
    auto it = action_index.find(string(name));
    if (it == action_index.end())
        return nullopt;
    return it->second;
}

const Action &PlanningModel::action(string_view name) const {
    auto index = find_action(name);
    if (!index)
        throw InputError("unknown action " + string(name));
    return actions_[*index];
}

bool operator==(const PlanningModel &a, const PlanningModel &b) {
    if (a.table_ != b.table_) {
        if (a.table_->size() != b.table_->size())
            return false;
        for (FluentId id = 0; id < a.table_->size(); ++id)
            if (a.table_->display(id) != b.table_->display(id))
                return false;
    }
    return a.fluents_ == b.fluents_ && a.actions_ == b.actions_ &&
           a.init_ == b.init_ && a.goal_ == b.goal_;
}

bool applicable(const State &s, const Action &a) {
    return s.contains_all(a.prec);
}

State apply_effects(const State &s, const Action &a) {
    State next = s;
    vector<const ConditionalEffect *> triggered;
    for (const ConditionalEffect &e : a.effects)
        if (s.contains_all(e.condition))
            triggered.push_back(&e);
    for (const ConditionalEffect *e : triggered)
        for (FluentId id : e->dels)
            next.erase(id);
    for (const ConditionalEffect *e : triggered)
        for (FluentId id : e->adds)
            next.insert(id);
    return next;
}

State apply_action(const State &s, const Action &a) {
    if (!applicable(s, a)) {
        vector<FluentId> missing;
        for (FluentId id : a.prec)
            if (!s.contains(id))
                missing.push_back(id);
        ostringstream msg;
        msg << "precondition of " << a.name << " violated; missing fluent ids";
        for (FluentId id : missing)
            msg << " " << id;
        throw PreconditionError(msg.str());
    }
    return apply_effects(s, a);
}

ValidationTrace validate_plan(const PlanningModel &m, const Plan &plan) {
    ValidationTrace trace;
    State s = m.init();
    trace.states.push_back(s);
    for (size_t i = 0; i < plan.actions.size(); ++i) {
        const Action &a = m.action(plan.actions[i]);
        if (!applicable(s, a)) {
            vector<FluentId> missing;
            for (FluentId id : a.prec)
                if (!s.contains(id))
                    missing.push_back(id);
            trace.status = ValidationTrace::Status::failed;
            trace.failing_index = i;
            trace.unsatisfied = missing;
            return trace;
        }
        s = apply_effects(s, a);
        trace.states.push_back(s);
    }
    if (!m.is_goal(s)) {
        vector<FluentId> missing;
        for (FluentId id : m.goal())
            if (!s.contains(id))
                missing.push_back(id);
        trace.status = ValidationTrace::Status::failed;
        trace.failing_index = plan.actions.size();
        trace.unsatisfied = missing;
    }
    return trace;
}
}
