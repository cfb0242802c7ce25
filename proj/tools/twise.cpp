// Command-line front end: build families from recursion plans, verify
// uniformity of family files, certify selection files, print the selection
// lower bound and the recursion size table.
//
// Exit codes: 0 pass, 1 property failure, 2 usage/parse error, 3 resource cap.

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "twise/twise.hpp"

namespace {

using namespace twise;

std::shared_ptr<Selection> load_selection(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open selection file '" + path + "'");
    return std::make_shared<Selection>(read_selection(is));
}

PermFamily load_family(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open family file '" + path + "'");
    return read_family(is);
}

// Recursively verify combiner hypotheses at every combine node.
bool paranoid_check(const PlanPtr& node, std::ostream& log) {
    switch (node->kind) {
    case PlanKind::Base:
        return true;
    case PlanKind::Combine: {
        for (const auto& c : node->children)
            if (!paranoid_check(c, log)) return false;
        Selection sel = node->custom_sel ? *node->custom_sel : Selection::complete(node->n);
        PermFamily a = build(node->children[0]);
        PermFamily b = build(node->children[1]);
        auto pre = verify_combine_preconditions(sel, a, b, node->children[0]->t);
        if (!pre.pass) {
            log << "paranoid: combine node n=" << node->n << " t=" << node->t
                << " violates a hypothesis:\n"
                << "  selection " << pre.selection.render() << "\n"
                << "  A " << pre.a_report.render() << "\n"
                << "  B " << pre.b_report.render() << "\n";
            return false;
        }
        return true;
    }
    case PlanKind::CombineK: {
        for (const auto& c : node->children)
            if (!paranoid_check(c, log)) return false;
        int t_inner = (node->t - 1) / 2;
        PermFamily tau = build(node->children[0]);
        auto tau_rep = check_uniform(tau, node->t);
        if (!tau_rep.pass) {
            log << "paranoid: combine_k tau family fails at " << node->t << ": "
                << tau_rep.render() << "\n";
            return false;
        }
        for (std::size_t i = 1; i < node->children.size(); ++i) {
            auto rep = check_uniform(build(node->children[i]), t_inner);
            if (!rep.pass) {
                log << "paranoid: combine_k sigma family " << i << " fails at " << t_inner << ": "
                    << rep.render() << "\n";
                return false;
            }
        }
        return true;
    }
    }
    return false;
}

int cmd_build(int n, int t, bool use_catalog, const std::string& selection_file,
              const std::string& out_file, long long cap, bool paranoid) {
    PlanOptions opts;
    opts.use_catalog = use_catalog;
    if (!selection_file.empty()) opts.root_selection = load_selection(selection_file);
    PlanPtr p = plan(n, t, opts);

    std::ostream& plan_out = out_file.empty() ? std::cerr : std::cout;
    plan_out << render_plan(p) << "size=" << p->size << "\n";

    if (p->size > cap) {
        std::cerr << "build: size=" << p->size << " exceeds cap=" << cap
                  << " bound=" << t << "^" << 2 * n << "=" << size_bound(n, t) << "\n";
        return 3;
    }
    if (paranoid && !paranoid_check(p, std::cerr)) return 1;

    PermFamily fam = build(p);
    if (out_file.empty()) {
        write_family(std::cout, fam, BigInt(cap));
    } else {
        std::ofstream os(out_file);
        if (!os) throw std::invalid_argument("cannot open output file '" + out_file + "'");
        write_family(os, fam, BigInt(cap));
    }
    return 0;
}

int cmd_verify(const std::string& file, int t, const std::string& mode, std::uint64_t samples,
               std::uint64_t seed, double tol, int workers, std::uint64_t work_cap) {
    PermFamily fam = load_family(file);
    if (mode == "exact") {
        VerifyOptions opts;
        opts.work_cap = work_cap;
        opts.workers = workers;
        UniformityReport rep = check_uniform(fam, t, opts);
        std::cout << rep.render() << "\n";
        return rep.pass ? 0 : 1;
    }
    SampledReport rep = sampled_check(fam, t, samples, seed, tol);
    std::cout << rep.render() << "\n";
    return rep.pass ? 0 : 1;
}

int cmd_design(const std::string& file, int t) {
    auto sel = load_selection(file);
    DesignCertificate cert = certify_design(*sel, t);
    if (cert.lambda) {
        std::cout << "design verdict=pass t=" << t << " lambda=" << *cert.lambda << "\n";
    } else {
        std::cout << "design verdict=fail t=" << t << " witness=(";
        for (std::size_t i = 0; i < cert.witness.size(); ++i)
            std::cout << (i ? "," : "") << cert.witness[i];
        std::cout << ") count=" << cert.witness_count << " baseline=" << cert.baseline_count << "\n";
    }
    SelectionReport rep = check_selection(*sel, t);
    std::cout << "selection " << rep.render() << "\n";
    return (cert.lambda && rep.pass) ? 0 : 1;
}

int cmd_bound(int two_n, int t) {
    std::cout << design_lower_bound(two_n, t) << "\n";
    return 0;
}

int cmd_sizes(int max_m, int max_l) {
    for (const auto& row : size_table(max_m, max_l))
        std::cout << "m=" << row.m << " l=" << row.l << " n=" << row.n << " t=" << row.t
                  << " improved=" << row.improved << " naive=" << row.naive
                  << " bound=" << row.bound << " trivial=" << row.trivial << "\n";
    return 0;
}

int cmd_info(int n, int t, bool use_catalog, const std::string& selection_file) {
    PlanOptions opts;
    opts.use_catalog = use_catalog;
    if (!selection_file.empty()) opts.root_selection = load_selection(selection_file);
    PlanPtr p = plan(n, t, opts);
    std::cout << render_plan(p) << "size=" << p->size << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact t-wise uniform permutation families: recursive construction and verification"};
    app.require_subcommand(1);

    std::function<int()> action;

    {
        auto* c = app.add_subcommand("build", "build a family for (n, t) and export it");
        auto n = std::make_shared<int>(0);
        auto t = std::make_shared<int>(0);
        auto catalog = std::make_shared<bool>(true);
        auto sel = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto cap = std::make_shared<long long>(10'000'000);
        auto paranoid = std::make_shared<bool>(false);
        c->add_option("n", *n, "degree, a power of two")->required();
        c->add_option("t", *t, "strength, of the form 2^l - 1")->required();
        c->add_flag("--catalog,!--no-catalog", *catalog,
                    "use known base families as shortcuts (default on)");
        c->add_option("--selection", *sel, "selection file replacing the root's complete selection");
        c->add_option("--out", *out, "output file (default: stdout)");
        c->add_option("--cap", *cap, "materialization cap (default 10000000)");
        c->add_flag("--paranoid", *paranoid, "verify combiner hypotheses at every node first");
        c->callback([=, &action] {
            action = [=] { return cmd_build(*n, *t, *catalog, *sel, *out, *cap, *paranoid); };
        });
    }
    {
        auto* c = app.add_subcommand("verify", "check a family file for exact t-wise uniformity");
        auto file = std::make_shared<std::string>();
        auto t = std::make_shared<int>(0);
        auto mode = std::make_shared<std::string>("exact");
        auto samples = std::make_shared<std::uint64_t>(10'000);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto tol = std::make_shared<double>(0.01);
        auto workers = std::make_shared<int>(1);
        auto work_cap = std::make_shared<std::uint64_t>(1'000'000'000ULL);
        c->add_option("file", *file, "permfamily file")->required();
        c->add_option("--t", *t, "strength to test")->required();
        c->add_option("--mode", *mode, "exact or sampled")
            ->check(CLI::IsMember({"exact", "sampled"}));
        c->add_option("--samples", *samples, "sample count (sampled mode)");
        c->add_option("--seed", *seed, "sampling seed (sampled mode)");
        c->add_option("--tol", *tol, "max allowed deviation (sampled mode)");
        c->add_option("--workers", *workers, "verifier threads");
        c->add_option("--work-cap", *work_cap, "exact-mode work cap (|T| * (n)_t)");
        c->callback([=, &action] {
            action = [=] {
                return cmd_verify(*file, *t, *mode, *samples, *seed, *tol, *workers, *work_cap);
            };
        });
    }
    {
        auto* c = app.add_subcommand("design", "certify a selection file as a t-design");
        auto file = std::make_shared<std::string>();
        auto t = std::make_shared<int>(0);
        c->add_option("file", *file, "selection file")->required();
        c->add_option("--t", *t, "design strength")->required();
        c->callback([=, &action] { action = [=] { return cmd_design(*file, *t); }; });
    }
    {
        auto* c = app.add_subcommand("bound", "print the minimum size of a (2n,t)-selection");
        auto two_n = std::make_shared<int>(0);
        auto t = std::make_shared<int>(0);
        c->add_option("two_n", *two_n, "ground-set size (even)")->required();
        c->add_option("t", *t, "strength")->required();
        c->callback([=, &action] { action = [=] { return cmd_bound(*two_n, *t); }; });
    }
    {
        auto* c = app.add_subcommand("sizes", "recursion size table: improved vs naive vs bound");
        auto max_m = std::make_shared<int>(4);
        auto max_l = std::make_shared<int>(3);
        c->add_option("--max-m", *max_m, "largest m (n = 2^m)");
        c->add_option("--max-l", *max_l, "largest l (t = 2^l - 1)");
        c->callback([=, &action] { action = [=] { return cmd_sizes(*max_m, *max_l); }; });
    }
    {
        auto* c = app.add_subcommand("info", "print the recursion plan for (n, t) without building");
        auto n = std::make_shared<int>(0);
        auto t = std::make_shared<int>(0);
        auto catalog = std::make_shared<bool>(true);
        auto sel = std::make_shared<std::string>();
        c->add_option("n", *n, "degree, a power of two")->required();
        c->add_option("t", *t, "strength, of the form 2^l - 1")->required();
        c->add_flag("--catalog,!--no-catalog", *catalog,
                    "use known base families as shortcuts (default on)");
        c->add_option("--selection", *sel, "selection file replacing the root's complete selection");
        c->callback([=, &action] { action = [=] { return cmd_info(*n, *t, *catalog, *sel); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action();
    } catch (const twise::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const twise::capacity_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
