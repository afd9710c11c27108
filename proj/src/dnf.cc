#include "plexplain/dnf.h"

#include "plexplain/errors.h"

#include <algorithm>

using namespace std;

namespace plexplain {
static bool is_subset(const vector<FluentId> &a, const vector<FluentId> &b) {
    return includes(b.begin(), b.end(), a.begin(), a.end());
}

static vector<vector<FluentId>> minimize(vector<vector<FluentId>> disjuncts) {
    for (auto &c : disjuncts)
        c = sorted_unique(move(c));
    sort(disjuncts.begin(), disjuncts.end(), [](const auto &a, const auto &b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    });
    disjuncts.erase(unique(disjuncts.begin(), disjuncts.end()), disjuncts.end());
    vector<vector<FluentId>> kept;
    for (auto &c : disjuncts) {
        bool subsumed = any_of(kept.begin(), kept.end(),
                               [&](const auto &k) {return is_subset(k, c);});
        if (!subsumed)
            kept.push_back(move(c));
    }
    sort(kept.begin(), kept.end());
    return kept;
}

DnfFormula::DnfFormula(vector<vector<FluentId>> disjuncts)
    : disjuncts_(minimize(move(disjuncts))) {
}

size_t DnfFormula::max_conjunct_size() const {
    size_t result = 0;
    for (const auto &c : disjuncts_)
        result = max(result, c.size());
    return result;
}

vector<FluentId> DnfFormula::fluents() const {
    vector<FluentId> result;
    for (const auto &c : disjuncts_)
        result.insert(result.end(), c.begin(), c.end());
    return sorted_unique(move(result));
}

DnfFormula dnf_and(const DnfFormula &a, const DnfFormula &b) {
    vector<vector<FluentId>> product;
    for (const auto &x : a.disjuncts())
        for (const auto &y : b.disjuncts()) {
            vector<FluentId> c = x;
            c.insert(c.end(), y.begin(), y.end());
            product.push_back(move(c));
        }
    return DnfFormula(move(product));
}

DnfFormula dnf_or(const DnfFormula &a, const DnfFormula &b) {
    auto all = a.disjuncts();
    all.insert(all.end(), b.disjuncts().begin(), b.disjuncts().end());
    return DnfFormula(move(all));
}

DnfFormula normalize_dnf(const RawFormula &raw) {
    switch (raw.kind) {
    case RawFormula::Kind::atom:
        return DnfFormula::atom(raw.atom);
    case RawFormula::Kind::conjunction: {
        DnfFormula result = DnfFormula::verum();
        for (const RawFormula &child : raw.children)
            result = dnf_and(result, normalize_dnf(child));
        return result;
    }
    case RawFormula::Kind::disjunction: {
        DnfFormula result = DnfFormula::falsum();
        for (const RawFormula &child : raw.children)
            result = dnf_or(result, normalize_dnf(child));
        return result;
    }
    case RawFormula::Kind::negation:
        throw InputError("negation is not supported in landmark or guard formulas");
    }
    return DnfFormula::falsum();
}

bool holds(const State &s, const DnfFormula &phi) {
    for (const auto &c : phi.disjuncts())
        if (s.contains_all(c))
            return true;
    return false;
}

bool holds(const State &s, const RawFormula &raw) {
    switch (raw.kind) {
    case RawFormula::Kind::atom:
        return s.contains(raw.atom);
    case RawFormula::Kind::conjunction:
        return all_of(raw.children.begin(), raw.children.end(),
                      [&](const RawFormula &c) {return holds(s, c);});
    case RawFormula::Kind::disjunction:
        return any_of(raw.children.begin(), raw.children.end(),
                      [&](const RawFormula &c) {return holds(s, c);});
    case RawFormula::Kind::negation:
        return !holds(s, raw.children.front());
    }
    return false;
}

DnfFormula restrict_to(const DnfFormula &phi, const FluentSet &fluents) {
    vector<vector<FluentId>> kept;
    for (const auto &c : phi.disjuncts()) {
        vector<FluentId> conj;
        for (FluentId id : c)
            if (fluents.contains(id))
                conj.push_back(id);
        kept.push_back(move(conj));
    }
    return DnfFormula(move(kept));
}

static string conjunction_string(const vector<FluentId> &c, const FluentTable &table) {
    if (c.size() == 1)
        return table.display(c[0]);
    string result = "(and";
    for (FluentId id : c)
        result += " " + table.display(id);
    return result + ")";
}

string to_string(const DnfFormula &phi, const FluentTable &table) {
    if (phi.size() == 1)
        return conjunction_string(phi.disjuncts()[0], table);
    string result = "(or";
    for (const auto &c : phi.disjuncts())
        result += " " + conjunction_string(c, table);
    return result + ")";
}
}
