#include "plexplain/abstraction.h"
#include "plexplain/advice.h"
#include "plexplain/errors.h"
#include "plexplain/explain.h"
#include "plexplain/landmarks.h"
#include "plexplain/pddl.h"
#include "plexplain/search.h"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace std;
using namespace plexplain;

namespace {
enum ExitCode {
    explained = 0,
    solvable_root = 1,
    input_error = 2,
    exhausted = 3,
    internal_error = 4,
};

string read_file(const string &path) {
    ifstream in(path);
    if (!in)
        throw InputError("cannot read " + path);
    ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const filesystem::path &path, const string &text) {
    ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << text;
}

struct Inputs {
    string domain;
    string problem;
    string advice;
    string lattice;
};

PlanningModel load(const Inputs &in) {
    return load_model(read_file(in.domain), read_file(in.problem));
}

optional<ConstraintFSA> load_advice(const Inputs &in, const PlanningModel &m) {
    if (in.advice.empty())
        return nullopt;
    ParsedAdvice parsed = parse_advice(read_file(in.advice), m);
    for (const string &w : parsed.warnings)
        cerr << "warning: " << w << "\n";
    return parsed.fsa;
}

SearchLimits limits_from(uint64_t nodes, double seconds) {
    SearchLimits limits;
    limits.max_expansions = nodes;
    limits.max_time = chrono::duration<double>(seconds);
    return limits;
}

// Writes <stem>.pddl as the domain and <stem>-problem.pddl next to it.
void dump_model(const filesystem::path &domain_path, const PlanningModel &m,
                const string &name) {
    PddlText text = write_pddl(m, name);
    filesystem::path problem_path = domain_path;
    problem_path.replace_filename(domain_path.stem().string() + "-problem" +
                                  domain_path.extension().string());
    write_file(domain_path, text.domain);
    write_file(problem_path, text.problem);
}
}

int main(int argc, char **argv) {
    CLI::App app{"Explains why a planning problem, possibly under plan advice, has no solution"};
    app.require_subcommand(1);

    Inputs in;
    string format = "human";
    string exemplar = "auto";
    uint64_t node_budget = SearchLimits{}.max_expansions;
    double time_budget = SearchLimits{}.max_time.count();
    string dump_dir;
    string out_file;

    auto model_options = [&](CLI::App *sub) {
        sub->add_option("--domain", in.domain, "domain file")->required();
        sub->add_option("--problem", in.problem, "problem file")->required();
        sub->add_option("--node-budget", node_budget, "expansions per search");
        sub->add_option("--time-budget", time_budget, "seconds per search");
    };

    CLI::App *explain_cmd = app.add_subcommand("explain", "explain unsolvability");
    model_options(explain_cmd);
    explain_cmd->add_option("--lattice", in.lattice, "lattice spec (JSON)")->required();
    explain_cmd->add_option("--advice", in.advice, "advice file (JSON)");
    explain_cmd->add_option("--format", format)->check(CLI::IsMember({"human", "json"}));
    explain_cmd->add_option("--exemplar", exemplar)
        ->check(CLI::IsMember({"auto", "always", "never"}));
    explain_cmd->add_option("--dump-compiled", dump_dir,
                            "write the constrained model and the failed subgoal's "
                            "compilation to this directory");

    CLI::App *check_cmd = app.add_subcommand("check", "decide solvability and print a plan");
    model_options(check_cmd);
    check_cmd->add_option("--advice", in.advice, "advice file (JSON)");

    CLI::App *landmarks_cmd = app.add_subcommand("landmarks", "dump the landmark graph");
    model_options(landmarks_cmd);

    CLI::App *compile_cmd = app.add_subcommand("compile-advice",
                                               "write the advice-constrained model");
    model_options(compile_cmd);
    compile_cmd->add_option("--advice", in.advice, "advice file (JSON)")->required();
    compile_cmd->add_option("--out", out_file, "domain output; the problem goes to "
                            "<stem>-problem<ext>")->required();

    CLI::App *lattice_cmd = app.add_subcommand("lattice", "list lattice nodes");
    model_options(lattice_cmd);
    lattice_cmd->add_option("--lattice", in.lattice, "lattice spec (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        SearchLimits limits = limits_from(node_budget, time_budget);
        PlanningModel m = load(in);

        if (*explain_cmd) {
            ExplainOptions options;
            options.limits = limits;
            options.exemplar = exemplar == "always" ? ExemplarMode::always
                             : exemplar == "never" ? ExemplarMode::never
                                                   : ExemplarMode::automatic;
            if (!dump_dir.empty()) {
                filesystem::create_directories(dump_dir);
                options.on_compiled = [&](const string &name, const PlanningModel &model) {
                    dump_model(filesystem::path(dump_dir) / (name + ".pddl"), model, name);
                };
            }
            LatticeSpec spec = parse_lattice_spec(read_file(in.lattice));
            Explanation e = explain(m, spec, load_advice(in, m), options);
            cout << (format == "json" ? render_json(e) : render_human(e));
            return e.status == Explanation::Status::solvable_root ? solvable_root : explained;
        }
        if (*check_cmd) {
            optional<ConstraintFSA> advice = load_advice(in, m);
            SearchResult r;
            Plan plan;
            if (advice) {
                ConstrainedModel cm = compose(m, *advice);
                r = decide_solvable(cm.compiled, limits);
                if (r.solvable())
                    plan = strip_meta(cm, r.plan);
            } else {
                r = decide_solvable(m, limits);
                plan = r.plan;
            }
            if (r.exhausted()) {
                cerr << "resource exhausted: " << r.limit << "\n";
                return exhausted;
            }
            cout << to_string(r.outcome) << "\n";
            if (r.solvable())
                cout << "plan: " << to_string(plan) << "\n";
            cout << "expansions: " << r.expansions << "\n";
            return explained;
        }
        if (*landmarks_cmd) {
            LandmarkOptions options;
            SearchResult r = decide_solvable(m, limits);
            if (r.exhausted())
                throw ResourceExhausted("solvability check hit the " + r.limit);
            if (!r.solvable())
                throw InputError("landmarks are extracted from solvable models only");
            options.check_solvable = false;
            cout << render_landmarks_json(extract_landmarks(m, options), m.table());
            return explained;
        }
        if (*compile_cmd) {
            ConstrainedModel cm = compose(m, *load_advice(in, m));
            dump_model(out_file, cm.compiled, "constrained");
            return explained;
        }
        if (*lattice_cmd) {
            LatticeSpec spec = parse_lattice_spec(read_file(in.lattice));
            AbstractionLattice lat(m, resolve_groups(spec, m), spec.forbidden, limits);
            cout << "projected\tfluents\tsolvable\n";
            for (GroupMask mask = 0; mask <= lat.full_mask(); ++mask) {
                if (!lat.admissible(mask))
                    continue;
                const LatticeNode &node = lat.node(mask);
                string names;
                for (const string &g : node.projected())
                    names += (names.empty() ? "" : ",") + g;
                cout << "{" << names << "}\t" << node.model().num_fluents() << "\t"
                     << (lat.solvable(node) ? "yes" : "no") << "\n";
            }
            return explained;
        }
    } catch (const ResourceExhausted &e) {
        cerr << "resource exhausted: " << e.what() << "\n";
        return exhausted;
    } catch (const NoExplanation &e) {
        cerr << "error: " << e.what() << "\n";
        return input_error;
    } catch (const InputError &e) {
        cerr << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const PreconditionError &e) {
        cerr << "error: " << e.what() << "\n";
        return input_error;
    } catch (const exception &e) {
        cerr << "internal error: " << e.what() << "\n";
        return internal_error;
    }
    return explained;
}
