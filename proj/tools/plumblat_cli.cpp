#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <plumblat/plumblat.hpp>

namespace pb = plumblat;
using pb::ojson;

namespace {

struct Options {
    std::string graph_path;
    std::string cycle;
    std::string chern_estar;
    std::string chern_e;
    std::string subgraph;
    std::string tower_path;
    std::string oracle_path;
    std::string vertex;
    bool have_cycle = false;
    bool have_estar = false;
    bool have_e = false;
    bool have_subgraph = false;
    bool parallel = false;
    int nmax = 5;
    unsigned long long seed = 0;
    long long max_box = 0;
};

struct Context {
    std::string digest;
    pb::Graph graph;
    std::optional<pb::Lattice> lattice;
    std::optional<std::vector<std::vector<int>>> layers;
    pb::SubStructure sub;
    ojson options = ojson::object();
};

Context load_context(const Options& opt, bool need_lattice = true) {
    Context ctx;
    std::string text = pb::load_file(opt.graph_path);
    ctx.digest = pb::fnv1a64(text);
    ctx.graph = pb::parse_graph(text);
    if (need_lattice) ctx.lattice.emplace(ctx.graph);
    return ctx;
}

pb::QVec chern_class(const Options& opt, const Context& ctx) {
    if (opt.have_estar == opt.have_e)
        throw pb::Error("give exactly one of --chern-estar or --chern-e");
    if (opt.have_estar) {
        pb::IVec c = pb::parse_int_coeffs(ctx.graph, opt.chern_estar);
        return ctx.lattice->from_estar_coords(c);
    }
    return pb::parse_rat_coeffs(ctx.graph, opt.chern_e);
}

void build_substructure(const Options& opt, Context& ctx) {
    const pb::Lattice& L = *ctx.lattice;
    if (!opt.tower_path.empty() && !opt.oracle_path.empty())
        throw pb::Error("--tower and --oracle are mutually exclusive");
    if (!opt.oracle_path.empty() && !opt.have_subgraph)
        throw pb::Error("--oracle needs --subgraph to name its vertex set");
    if (!opt.tower_path.empty() && opt.have_subgraph)
        throw pb::Error("--tower already determines the vertex subset; drop --subgraph");
    if (!opt.tower_path.empty()) {
        std::string text = pb::load_file(opt.tower_path);
        ctx.layers = pb::parse_tower_json(ojson::parse(text), ctx.graph);
        ctx.sub = pb::sub_tower_prefix(L, *ctx.layers, static_cast<int>(ctx.layers->size()));
        ctx.options["tower"] = pb::fnv1a64(text);
    } else if (!opt.oracle_path.empty()) {
        std::string text = pb::load_file(opt.oracle_path);
        auto verts = pb::parse_vertex_list(ctx.graph, opt.subgraph);
        ctx.sub = pb::sub_table(L, verts, pb::parse_h1table_json(ojson::parse(text), ctx.graph));
        ctx.options["oracle"] = pb::fnv1a64(text);
        ctx.options["subgraph"] = opt.subgraph;
    } else if (opt.have_subgraph) {
        ctx.sub = pb::sub_generic(L, pb::parse_vertex_list(ctx.graph, opt.subgraph));
        ctx.options["subgraph"] = opt.subgraph;
    } else {
        ctx.sub = pb::sub_empty(L);
    }
}

ojson opt_ivec(const pb::Graph& g, const std::optional<pb::IVec>& x) {
    if (!x) return nullptr;
    return pb::ivec_to_json(g, *x);
}

ojson dominance_json(const pb::Graph& g, const pb::DominanceReport& rep) {
    ojson j;
    j["dominant"] = rep.dominant;
    j["margin"] = pb::rat_to_string(rep.margin);
    j["witness"] = opt_ivec(g, rep.witness);
    j["checked"] = rep.checked;
    return j;
}

ojson report_shell(const std::string& command, const Options& opt, const Context& ctx) {
    ojson j;
    j["format"] = "report/1";
    j["command"] = command;
    j["input"] = opt.graph_path;
    j["digest"] = ctx.digest;
    j["options"] = ctx.options;
    return j;
}

void finish_report(ojson& j, const Context& ctx, long long ms) {
    ojson d;
    d["vertices"] = ctx.graph.n();
    if (ctx.sub.oracle) {
        d["oracle"] = ctx.sub.oracle->kind();
        d["oracle_queries"] = ctx.sub.oracle->queries();
        d["memo_entries"] = ctx.sub.oracle->memo_entries();
        d["substitutions"] = ctx.sub.oracle->substitutions();
    }
    d["time_ms"] = ms;
    j["diagnostics"] = d;
    std::cout << j.dump(2) << "\n";
}

int cmd_validate(const Options& opt) {
    ojson j;
    j["format"] = "report/1";
    j["command"] = "validate";
    j["input"] = opt.graph_path;
    std::string text = pb::load_file(opt.graph_path);
    j["digest"] = pb::fnv1a64(text);
    ojson verdict;
    std::vector<std::string> problems;
    bool definite = false;
    try {
        pb::Graph g = pb::parse_graph(text);
        try {
            pb::Lattice L(g);
            definite = true;
            verdict["detH"] = static_cast<long long>(L.detH().get_si());
        } catch (const pb::Error& e) {
            problems.push_back(e.what());
        }
    } catch (const pb::Error& e) {
        problems.push_back(e.what());
    }
    verdict["valid"] = problems.empty();
    verdict["negative_definite"] = definite;
    verdict["problems"] = problems;
    j["results"] = verdict;
    std::cout << j.dump(2) << "\n";
    return problems.empty() ? 0 : 1;
}

int cmd_invariants(const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Context ctx = load_context(opt);
    build_substructure(opt, ctx);
    const pb::Lattice& L = *ctx.lattice;
    ojson j = report_shell("invariants", opt, ctx);
    ojson r;
    r["detH"] = static_cast<long long>(L.detH().get_si());
    r["zk"] = pb::qvec_to_json(ctx.graph, L.zk());
    r["numerically_gorenstein"] = pb::numerically_gorenstein(L);
    auto zm = pb::laufer_zmin(L);
    r["zmin"] = pb::ivec_to_json(ctx.graph, zm.zmin);
    r["laufer_steps"] = zm.steps;
    auto cls = pb::classify(L);
    r["classify"] = pb::graph_class_name(cls.kind);
    r["min_chi"] = pb::rat_to_string(cls.min_chi);
    r["min_chi_witness"] = pb::ivec_to_json(ctx.graph, cls.witness);
    if (ctx.sub.empty()) {
        r["pg_generic"] = pb::pg_generic(L);
    } else {
        auto pg = pb::pg_relgen(L, ctx.sub, opt.parallel);
        r["pg_relgen"] = pg.pg;
        r["pg_box"] = pb::ivec_to_json(ctx.graph, pg.box);
        r["pg_generic"] = pb::pg_generic(L);
    }
    j["results"] = r;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0).count();
    finish_report(j, ctx, ms);
    return 0;
}

int cmd_h1_h0(const Options& opt, bool want_h0) {
    auto t0 = std::chrono::steady_clock::now();
    Context ctx = load_context(opt);
    build_substructure(opt, ctx);
    const pb::Lattice& L = *ctx.lattice;
    pb::QVec lp = chern_class(opt, ctx);
    if (opt.have_estar) ctx.options["chern_estar"] = opt.chern_estar;
    if (opt.have_e) ctx.options["chern_e"] = opt.chern_e;
    ojson j = report_shell(want_h0 ? "h0" : "h1", opt, ctx);
    ojson r;

    if (!opt.have_cycle) {
        auto nat = pb::h1_natural(L, lp, ctx.sub, opt.parallel);
        r["h1_natural"] = nat.h1;
        r["box"] = pb::ivec_to_json(ctx.graph, nat.box);
        r["effective_branch"] = nat.effective_branch;
        if (nat.effective_branch) r["d_correction"] = nat.d_value;
        j["results"] = r;
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0).count();
        finish_report(j, ctx, ms);
        return 0;
    }

    ctx.options["cycle"] = opt.cycle;
    pb::IVec Z = pb::parse_int_coeffs(ctx.graph, opt.cycle);
    if (ctx.layers) {
        auto res = pb::relgen_natural(L, Z, lp, *ctx.layers,
                                      static_cast<int>(ctx.layers->size()), opt.parallel);
        r["h1"] = res.h1;
        r["h0"] = pb::chi_sheaf(L, Z, lp) + res.h1;
        r["chi_sheaf"] = pb::chi_sheaf(L, Z, lp);
        r["argmin"] = pb::ivec_to_json(ctx.graph, res.argmin);
        r["dominance"] = dominance_json(ctx.graph, res.dominance);
        r["h0reg_nonempty"] = res.h0reg_nonempty;
        r["coefficients_positive"] = res.coefficients_positive;
        r["substitutions"] = res.substitutions;
    } else {
        auto h1 = pb::h1_relative_bundle(L, Z, lp, ctx.sub, opt.parallel);
        auto h0 = pb::h0_relative_bundle(L, Z, lp, ctx.sub, opt.parallel);
        auto dom = pb::relative_dominant(L, Z, lp, ctx.sub, opt.parallel);
        r["h1"] = h1.h1;
        r["h0"] = h0.h0;
        r["chi_sheaf"] = h0.chi;
        r["argmin"] = pb::ivec_to_json(ctx.graph, h1.argmin);
        r["realizable"] = pb::chern_realizable(L, lp);
        r["dominance"] = dominance_json(ctx.graph, dom);
    }
    auto ec = pb::eca_dims(L, Z, lp, ctx.sub, opt.parallel);
    r["eca"] = ec.eca;
    r["eca_rel"] = ec.eca_rel;
    r["fiber_dim"] = ec.fiber;
    j["results"] = r;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0).count();
    finish_report(j, ctx, ms);
    return 0;
}

int cmd_semigroup(const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Context ctx = load_context(opt);
    build_substructure(opt, ctx);
    pb::QVec lp = chern_class(opt, ctx);
    if (opt.have_estar) ctx.options["chern_estar"] = opt.chern_estar;
    if (opt.have_e) ctx.options["chern_e"] = opt.chern_e;
    ojson j = report_shell("semigroup", opt, ctx);
    auto res = pb::san_member(*ctx.lattice, lp, ctx.sub, opt.parallel);
    ojson r;
    r["member"] = res.member;
    r["reason"] = res.reason;
    if (res.dominance) r["dominance"] = dominance_json(ctx.graph, *res.dominance);
    if (!res.box.empty()) r["box"] = pb::ivec_to_json(ctx.graph, res.box);
    j["results"] = r;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0).count();
    finish_report(j, ctx, ms);
    return res.member ? 0 : 1;
}

int cmd_dominant(const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Context ctx = load_context(opt);
    build_substructure(opt, ctx);
    pb::QVec lp = chern_class(opt, ctx);
    if (opt.have_estar) ctx.options["chern_estar"] = opt.chern_estar;
    if (opt.have_e) ctx.options["chern_e"] = opt.chern_e;
    ctx.options["cycle"] = opt.cycle;
    pb::IVec Z = pb::parse_int_coeffs(ctx.graph, opt.cycle);
    ojson j = report_shell("dominant", opt, ctx);
    auto rep = pb::relative_dominant(*ctx.lattice, Z, lp, ctx.sub, opt.parallel);
    j["results"] = dominance_json(ctx.graph, rep);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0).count();
    finish_report(j, ctx, ms);
    return rep.dominant ? 0 : 1;
}

int cmd_rational(const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Context ctx = load_context(opt);
    build_substructure(opt, ctx);
    ctx.options["cycle"] = opt.cycle;
    pb::IVec Z = pb::parse_int_coeffs(ctx.graph, opt.cycle);
    ojson j = report_shell("rational", opt, ctx);
    auto res = pb::relatively_rational(*ctx.lattice, Z, ctx.sub, opt.parallel);
    ojson r;
    r["relatively_rational"] = res.rational;
    r["margin"] = pb::rat_to_string(res.margin);
    r["witness"] = opt_ivec(ctx.graph, res.witness);
    r["checked"] = res.checked;
    j["results"] = r;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0).count();
    finish_report(j, ctx, ms);
    return res.rational ? 0 : 1;
}

int cmd_pg(const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Context ctx = load_context(opt);
    build_substructure(opt, ctx);
    ojson j = report_shell("pg", opt, ctx);
    ojson r;
    auto pg = pb::pg_relgen(*ctx.lattice, ctx.sub, opt.parallel);
    r["pg"] = pg.pg;
    r["mode"] = ctx.sub.empty() ? "generic" : "relatively-generic";
    r["box"] = pb::ivec_to_json(ctx.graph, pg.box);
    j["results"] = r;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0).count();
    finish_report(j, ctx, ms);
    return 0;
}

int cmd_classify(const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Context ctx = load_context(opt);
    ctx.sub = pb::sub_empty(*ctx.lattice);
    const pb::Lattice& L = *ctx.lattice;
    ojson j = report_shell("classify", opt, ctx);
    auto cls = pb::classify(L);
    ojson r;
    r["classify"] = pb::graph_class_name(cls.kind);
    r["min_chi"] = pb::rat_to_string(cls.min_chi);
    r["min_chi_witness"] = pb::ivec_to_json(ctx.graph, cls.witness);
    r["numerically_gorenstein"] = pb::numerically_gorenstein(L);
    r["pg_generic"] = pb::pg_generic(L);
    r["detH"] = static_cast<long long>(L.detH().get_si());
    j["results"] = r;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0).count();
    finish_report(j, ctx, ms);
    return 0;
}

int cmd_eca(const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Context ctx = load_context(opt);
    build_substructure(opt, ctx);
    pb::QVec lp = chern_class(opt, ctx);
    if (opt.have_estar) ctx.options["chern_estar"] = opt.chern_estar;
    if (opt.have_e) ctx.options["chern_e"] = opt.chern_e;
    ctx.options["cycle"] = opt.cycle;
    pb::IVec Z = pb::parse_int_coeffs(ctx.graph, opt.cycle);
    ojson j = report_shell("eca", opt, ctx);
    auto ec = pb::eca_dims(*ctx.lattice, Z, lp, ctx.sub, opt.parallel);
    ojson r;
    r["eca"] = ec.eca;
    r["eca_rel"] = ec.eca_rel;
    r["fiber_dim"] = ec.fiber;
    j["results"] = r;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0).count();
    finish_report(j, ctx, ms);
    return 0;
}

int cmd_elliptic(const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Context ctx = load_context(opt);
    build_substructure(opt, ctx);
    int v = ctx.graph.index_of(opt.vertex);
    ctx.options["vertex"] = opt.vertex;
    ctx.options["nmax"] = opt.nmax;
    ojson j = report_shell("elliptic-lemma", opt, ctx);
    auto chk = pb::elliptic_dominance_check(*ctx.lattice, v, opt.nmax, ctx.sub, opt.parallel);
    ojson r;
    r["table"] = ojson::array();
    for (const auto& e : chk.table) {
        ojson je;
        je["N"] = e.N;
        je["dominant"] = e.dominant;
        je["margin"] = pb::rat_to_string(e.margin);
        r["table"].push_back(je);
    }
    r["implication_holds"] = chk.implication_holds;
    j["results"] = r;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0).count();
    finish_report(j, ctx, ms);
    return chk.implication_holds ? 0 : 1;
}

int cmd_corpus(const std::string& name, int an_n, unsigned long long seed) {
    pb::Graph g;
    if (name == "a1") g = pb::graph_a1();
    else if (name == "a2") g = pb::graph_a2();
    else if (name == "a4") g = pb::graph_a4();
    else if (name == "d4") g = pb::graph_d4();
    else if (name == "e6") g = pb::graph_e6();
    else if (name == "e7") g = pb::graph_e7();
    else if (name == "e8") g = pb::graph_e8();
    else if (name == "minus3") g = pb::graph_minus3();
    else if (name == "star237") g = pb::graph_star237();
    else if (name == "an") g = pb::chain_graph(an_n);
    else if (name == "random") g = pb::random_tree(seed);
    else throw pb::Error("unknown corpus graph '" + name + "'");
    std::cout << pb::graph_to_json(g).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topological and generic-analytic invariants of normal surface singularities "
                 "from plumbing graphs"};
    app.require_subcommand(1);
    Options opt;
    bool json_flag = true;

    app.add_flag("--json", json_flag, "machine-readable JSON output (default)");
    app.add_option("--seed", opt.seed, "seed for the random-tree generator");
    app.add_option("--max-box", opt.max_box, "override the scan-box guard");
    app.add_flag("--parallel", opt.parallel, "parallel box scans (same results as sequential)");

    auto add_graph_arg = [&](CLI::App* c) {
        c->fallthrough();
        c->add_option("graph", opt.graph_path, "plumbing graph JSON file")->required();
    };
    auto add_sub_flags = [&](CLI::App* c) {
        c->add_option("--subgraph", opt.subgraph, "comma-separated vertex ids carrying a generic substructure")
            ->each([&](const std::string&) { opt.have_subgraph = true; });
        c->add_option("--tower", opt.tower_path, "tower JSON file (tower/1)");
        c->add_option("--oracle", opt.oracle_path, "h1 table JSON file (h1table/1)");
    };
    auto add_chern_flags = [&](CLI::App* c) {
        c->add_option("--chern-estar", opt.chern_estar, "Chern class, integer E*-coordinates")
            ->each([&](const std::string&) { opt.have_estar = true; });
        c->add_option("--chern-e", opt.chern_e, "Chern class, rational E-coordinates")
            ->each([&](const std::string&) { opt.have_e = true; });
    };
    auto add_cycle_flag = [&](CLI::App* c, bool required) {
        auto* o = c->add_option("--cycle", opt.cycle, "effective cycle, integer coefficients")
                      ->each([&](const std::string&) { opt.have_cycle = true; });
        if (required) o->required();
    };

    CLI::App* validate = app.add_subcommand("validate", "structural and definiteness checks");
    add_graph_arg(validate);

    CLI::App* invariants = app.add_subcommand("invariants", "lattice invariants of the graph");
    add_graph_arg(invariants);
    add_sub_flags(invariants);

    CLI::App* h1 = app.add_subcommand("h1", "generic h1 on a cycle (or of a natural germ bundle)");
    add_graph_arg(h1);
    add_cycle_flag(h1, false);
    add_chern_flags(h1);
    add_sub_flags(h1);

    CLI::App* h0 = app.add_subcommand("h0", "generic h0 on a cycle");
    add_graph_arg(h0);
    add_cycle_flag(h0, false);
    add_chern_flags(h0);
    add_sub_flags(h0);

    CLI::App* semigroup = app.add_subcommand("semigroup", "analytic-semigroup membership");
    add_graph_arg(semigroup);
    add_chern_flags(semigroup);
    add_sub_flags(semigroup);

    CLI::App* dominant = app.add_subcommand("dominant", "relative dominance of (cycle, Chern class)");
    add_graph_arg(dominant);
    add_cycle_flag(dominant, true);
    add_chern_flags(dominant);
    add_sub_flags(dominant);

    CLI::App* rational = app.add_subcommand("rational", "relative rationality on a cycle");
    add_graph_arg(rational);
    add_cycle_flag(rational, true);
    add_sub_flags(rational);

    CLI::App* pg = app.add_subcommand("pg", "geometric genus of the (relatively) generic germ");
    add_graph_arg(pg);
    add_sub_flags(pg);

    CLI::App* classify = app.add_subcommand("classify", "rational / elliptic / other");
    add_graph_arg(classify);

    CLI::App* eca = app.add_subcommand("eca", "effective Cartier / fiber dimensions");
    add_graph_arg(eca);
    add_cycle_flag(eca, true);
    add_chern_flags(eca);
    add_sub_flags(eca);

    CLI::App* elliptic = app.add_subcommand("elliptic-lemma", "dominance along multiples of a dual class");
    add_graph_arg(elliptic);
    elliptic->add_option("--vertex", opt.vertex, "vertex id")->required();
    elliptic->add_option("--nmax", opt.nmax, "largest multiple to test");
    add_sub_flags(elliptic);

    CLI::App* corpus = app.add_subcommand("corpus", "print a bundled or generated graph");
    corpus->fallthrough();
    std::string corpus_name;
    int an_n = 2;
    corpus->add_option("name", corpus_name, "a1|a2|a4|d4|e6|e7|e8|minus3|star237|an|random")
        ->required();
    corpus->add_option("--n", an_n, "chain length for 'an'");

    CLI11_PARSE(app, argc, argv);
    (void)json_flag;

    if (opt.max_box > 0) pb::detail::scan_guard().store(static_cast<unsigned long long>(opt.max_box));

    std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "validate") return cmd_validate(opt);
        if (cmd == "invariants") return cmd_invariants(opt);
        if (cmd == "h1") return cmd_h1_h0(opt, false);
        if (cmd == "h0") return cmd_h1_h0(opt, true);
        if (cmd == "semigroup") return cmd_semigroup(opt);
        if (cmd == "dominant") return cmd_dominant(opt);
        if (cmd == "rational") return cmd_rational(opt);
        if (cmd == "pg") return cmd_pg(opt);
        if (cmd == "classify") return cmd_classify(opt);
        if (cmd == "eca") return cmd_eca(opt);
        if (cmd == "elliptic-lemma") return cmd_elliptic(opt);
        if (cmd == "corpus") return cmd_corpus(corpus_name, an_n, opt.seed);
        throw pb::Error("unknown command");
    } catch (const std::exception& e) {
        ojson err;
        err["format"] = "report/1";
        err["command"] = cmd;
        err["error"] = e.what();
        std::cerr << err.dump(2) << "\n";
        return 2;
    }
}
