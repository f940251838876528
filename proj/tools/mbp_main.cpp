#include "mbp/bpn_report.hpp"
#include "mbp/koszul_solver.hpp"
#include "mbp/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace mbp;

struct Options {
    uint32_t p = 3;
    size_t rank = 2;
    size_t n = 1;
    size_t max_degree = 24;
    std::string mode = "koszul";
    bool reduced = false;
    std::string format = "plain";
    uint64_t seed = 1;
};

ring::Model parse_mode(const Options& o)
{
    if (o.mode == "native-p2")
        return ring::Model::NativeP2;
    if (o.mode == "koszul")
        return ring::Model::Koszul;
    throw CLI::ValidationError("--mode must be 'koszul' or 'native-p2'");
}

ring::ContextPtr make_ctx(const Options& o)
{
    return ring::Context::make(o.p, o.rank, parse_mode(o), o.max_degree,
                               o.n);
}

std::vector<size_t> parse_index_set(const std::string& s)
{
    std::vector<size_t> I;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        I.push_back(std::stoul(tok));
    std::sort(I.begin(), I.end());
    I.erase(std::unique(I.begin(), I.end()), I.end());
    return I;
}

void add_common(CLI::App* cmd, Options& o)
{
    cmd->add_option("--p", o.p, "prime field characteristic")
        ->envname("MBP_P");
    cmd->add_option("--rank", o.rank, "rank d of V")->envname("MBP_RANK");
    cmd->add_option("--n", o.n, "maximal Milnor index n");
    cmd->add_option("--max-degree", o.max_degree, "maximal total degree D")
        ->envname("MBP_MAXDEG");
    cmd->add_option("--mode", o.mode, "model: koszul | native-p2");
    cmd->add_flag("--reduced", o.reduced,
                  "drop the degree-0 unit class from reports");
    cmd->add_option("--format", o.format,
                    "output format: plain | json | csv | poincare");
    cmd->add_option("--seed", o.seed, "seed for randomized sweeps");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{
        "Exact calculator for the Milnor-derivation action on the mod-p "
        "cohomology of BV, its Margolis homology and subquotients, "
        "multi-Koszul preimages, and truncated Brown-Peterson dimension "
        "tables (mod-p shadows). Flags take precedence over MBP_* "
        "environment variables, which take precedence over defaults."};
    app.require_subcommand(1);
    Options o;

    auto* cmd_basis = app.add_subcommand("basis", "monomial basis of H^t");
    size_t basis_t = 0;
    add_common(cmd_basis, o);
    cmd_basis->add_option("--t", basis_t, "degree")->required();

    auto* cmd_apply = app.add_subcommand("apply", "apply Q_i to an element");
    size_t apply_i = 0;
    std::string apply_elt;
    add_common(cmd_apply, o);
    cmd_apply->add_option("--i", apply_i, "Milnor index")->required();
    cmd_apply->add_option("--element", apply_elt, "element expression")
        ->required();

    auto* cmd_hom = app.add_subcommand(
        "homology", "Margolis homology of Q_i per degree");
    size_t hom_i = 0;
    add_common(cmd_hom, o);
    cmd_hom->add_option("--i", hom_i, "Milnor index")->required();

    auto* cmd_sh = app.add_subcommand(
        "scriptH", "the subquotient socle/Im(Q_0...Q_n) per degree");
    add_common(cmd_sh, o);

    auto* cmd_solve = app.add_subcommand(
        "solve", "multi-Koszul preimage under the composite over I");
    std::string solve_I, solve_elt;
    bool solve_trace = false;
    add_common(cmd_solve, o);
    cmd_solve->add_option("--I", solve_I, "comma-separated index set")
        ->required();
    cmd_solve->add_option("--element", solve_elt, "cycle expression")
        ->required();
    cmd_solve->add_flag("--trace", solve_trace,
                        "print the alpha/beta/gamma certificate");

    auto* cmd_rep = app.add_subcommand(
        "bpn-report", "dimension tables: vtor, cotensor, L, scriptH");
    add_common(cmd_rep, o);

    auto* cmd_verify = app.add_subcommand(
        "verify-all", "full theorem sweep for one configuration");
    add_common(cmd_verify, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_basis->parsed()) {
            auto ctx = make_ctx(o);
            for (const auto& m : ctx->basis(basis_t))
                std::cout << ctx->print(m) << "\n";
            return 0;
        }
        if (cmd_apply->parsed()) {
            auto ctx = make_ctx(o);
            milnor::Ops ops(ctx);
            auto x = ctx->parse_element(apply_elt);
            std::cout << ctx->print(ops.apply(apply_i, x)) << "\n";
            return 0;
        }
        if (cmd_hom->parsed()) {
            auto ctx = make_ctx(o);
            milnor::Ops ops(ctx);
            margolis::Homology h(ops);
            std::cout << "t,dim_ker,dim_im,dim_homology\n";
            for (size_t t = o.reduced ? 1 : 0; t <= o.max_degree; ++t) {
                auto e = h.margolis_homology(hom_i, t);
                std::cout << t << ',' << e.dim_numerator << ','
                          << e.dim_denominator << ',' << e.dim_quotient
                          << "\n";
            }
            return 0;
        }
        if (cmd_sh->parsed()) {
            auto ctx = make_ctx(o);
            milnor::Ops ops(ctx);
            margolis::Homology h(ops);
            if (o.format == "json")
                std::cout << margolis::script_H_report_json(
                    h, o.n, o.max_degree, o.reduced);
            else
                std::cout << margolis::script_H_report_csv(
                    h, o.n, o.max_degree, o.reduced);
            return 0;
        }
        if (cmd_solve->parsed()) {
            auto ctx = make_ctx(o);
            milnor::Ops ops(ctx);
            koszul::Solver solver(ops);
            auto I = parse_index_set(solve_I);
            auto x = ctx->parse_element(solve_elt);
            auto cert = solver.multi_preimage_recursive(I, x);
            std::cout << "y = " << ctx->print(cert.output) << "\n";
            if (solve_trace) {
                for (const auto& step : cert.trace) {
                    std::cout << "alpha_" << step.k << " = "
                              << ctx->print(step.alpha) << "\n";
                    if (step.beta)
                        std::cout << "beta_" << step.k + 1 << " = "
                                  << ctx->print(*step.beta) << "\n";
                    if (step.gamma)
                        std::cout << "gamma_" << step.k + 1 << " = "
                                  << ctx->print(*step.gamma) << "\n";
                }
            }
            return 0;
        }
        if (cmd_rep->parsed()) {
            auto ctx = make_ctx(o);
            milnor::Ops ops(ctx);
            margolis::Homology h(ops);
            bpn::Report rep(h, o.reduced);
            auto r = rep.build(o.n, o.max_degree);
            if (o.format == "json")
                std::cout << bpn::to_json(r);
            else if (o.format == "poincare")
                std::cout << bpn::to_poincare(r);
            else
                std::cout << bpn::to_csv(r);
            return 0;
        }
        if (cmd_verify->parsed()) {
            verify::Config cfg;
            cfg.p = o.p;
            cfg.rank = o.rank;
            cfg.n_max = o.n;
            cfg.max_degree = o.max_degree;
            cfg.model = parse_mode(o);
            cfg.reduced = o.reduced;
            cfg.seed = o.seed;
            auto res = verify::run(cfg);
            std::cout << res.report;
            return res.all_pass ? 0 : 2;
        }
    }
    catch (const ring::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    }
    catch (const ring::degree_out_of_range& e) {
        std::cerr << "degree out of range: " << e.what() << "\n";
        return 1;
    }
    catch (const koszul::not_a_cycle& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return 1;
    }
    catch (const koszul::exactness_failure& e) {
        // Exit 2 is reserved: the computation contradicts a theorem.
        std::cerr << "theorem-check failure: " << e.what() << "\n";
        return 2;
    }
    catch (const fp::not_a_subspace& e) {
        std::cerr << "theorem-check failure: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
