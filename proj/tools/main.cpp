#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>

#include "lipsharp/json_io.hpp"
#include "lipsharp/sharp_function.hpp"

namespace fs = std::filesystem;
using namespace lipsharp;
using io::json;
using num::BigInt;
using num::Dyadic;
using num::Exp2;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitConfigError = 2;

struct RunConfig {
    int N = 2;
    std::vector<std::int64_t> j;  // empty = auto
    double q_S = 2.0;
    cubetree::Mode mode = cubetree::Mode::Strict;
    int depth = 3;
    std::uint64_t seed = 42;
    int chains = 5;
    json profile_json;  // optional override; default: log profile of dimension N
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    RunConfig cfg;
    try {
        cfg.N = j.value("N", 2);
        cfg.q_S = j.value("q_S", 2.0);
        cfg.depth = j.value("depth", 3);
        cfg.seed = j.value("seed", 42ULL);
        cfg.chains = j.value("chains", 5);
        const std::string mode = j.value("mode", "strict");
        if (mode != "strict" && mode != "relaxed")
            throw ConfigError("config: mode must be strict|relaxed");
        cfg.mode = mode == "strict" ? cubetree::Mode::Strict : cubetree::Mode::Relaxed;
        if (j.contains("j") && !j["j"].is_string())
            cfg.j = j["j"].get<std::vector<std::int64_t>>();
        if (j.contains("profile")) cfg.profile_json = j["profile"];
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    return cfg;
}

cubetree::ParamSequence make_params(const RunConfig& cfg) {
    std::vector<std::int64_t> j = cfg.j;
    if (j.empty()) j = cfg.mode == cubetree::Mode::Strict ? std::vector<std::int64_t>{0, 9, 90, 819}
                                                          : std::vector<std::int64_t>{0, 3, 6};
    try {
        return cubetree::ParamSequence(cfg.N, j, cfg.mode);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
}

bool fatal_violations(const std::vector<cubetree::Violation>& vs) {
    for (const auto& v : vs)
        if (v.constraint.rfind("skipped:", 0) != 0) return true;
    return false;
}

json violations_to_json(const std::vector<cubetree::Violation>& vs) {
    json arr = json::array();
    for (const auto& v : vs)
        arr.push_back({{"constraint", v.constraint}, {"level", v.level}, {"detail", v.detail}});
    return arr;
}

void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

// ---------------------------------------------------------------------------
// construct

int cmd_construct(const RunConfig& cfg, const fs::path& outdir) {
    const auto p = make_params(cfg);
    const auto violations = validate_params(p);
    if (fatal_violations(violations)) {
        std::cerr << "parameter validation failed:\n";
        for (const auto& v : violations)
            if (v.constraint.rfind("skipped:", 0) != 0)
                std::cerr << "  [" << v.constraint << "] level " << v.level << ": " << v.detail
                          << "\n";
        return kExitConfigError;
    }

    json manifest;
    manifest["schema"] = "lipsharp-manifest-v1";
    manifest["params"] = io::params_to_json(p);
    manifest["violations"] = violations_to_json(violations);
    manifest["relaxed"] = p.mode() == cubetree::Mode::Relaxed;

    json measures = json::array();
    for (int n = 0; n <= p.n_max(); ++n) {
        const Dyadic m = cubetree::generation_measure(n, p);
        measures.push_back({{"generation", n},
                            {"exact", m.str()},
                            {"decimal", m.to_double()},
                            {"cardinality", p.cardinality(n).str()}});
    }
    manifest["generation_measures"] = measures;
    manifest["measure_lower_bound_2N_e_minus2_holds"] =
        p.mode() == cubetree::Mode::Strict ? cubetree::measure_lower_bound_holds(p, p.n_max())
                                           : false;

    const fs::path out = outdir / "manifest.json";
    write_file(out, manifest.dump(2));
    std::cout << "manifest written: " << out.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// probe

int cmd_probe(const RunConfig& cfg, const fs::path& outdir, int depth_flag,
              const std::string& chain_file) {
    const auto p = make_params(cfg);
    if (fatal_violations(validate_params(p))) {
        std::cerr << "invalid parameters; run construct for the violation list\n";
        return kExitConfigError;
    }
    sharpfn::SharpExample ex(p, cfg.q_S);

    int depth = depth_flag >= 0 ? depth_flag : cfg.depth;
    if (depth > p.n_max()) {
        std::cerr << "warning: depth " << depth << " capped at n_max = " << p.n_max() << "\n";
        depth = p.n_max();
    }

    std::vector<cubetree::CubeChain> chains;
    if (!chain_file.empty()) {
        std::ifstream in(chain_file);
        if (!in) {
            std::cerr << "cannot open chain file: " << chain_file << "\n";
            return kExitConfigError;
        }
        json j;
        in >> j;
        chains.push_back(io::chain_from_json(j));
    } else {
        std::mt19937_64 rng(cfg.seed);
        for (int i = 0; i < cfg.chains; ++i)
            chains.push_back(cubetree::random_selected_chain(p, depth, rng));
    }

    struct Row {
        int chain_id, level;
        std::int64_t radius_exp2;
        Exp2 bound, ratio, certified;
        std::string witness_kind;
        std::string witness_coords;
    };
    // probe sweeps parallelize freely; emission stays single-threaded
    std::vector<std::future<std::vector<Row>>> futures;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        futures.push_back(std::async(std::launch::async, [&, c] {
            std::vector<Row> rows;
            const auto bounds = sharpfn::lip_probe(ex, chains[c], depth);
            for (const auto& b : bounds) {
                Row r{static_cast<int>(c), b.level, b.radius_exp2, b.bound, Exp2{}, Exp2{}, "", ""};
                if (b.level >= 1) {
                    const auto w = sharpfn::nondiff_witness(ex, chains[c], b.level);
                    r.ratio = w.ratio;
                    r.certified = w.certified_bound;
                    r.witness_kind = w.y_is_center ? "center" : "boundary";
                    std::string coords;
                    for (const auto& ccv : w.y) coords += (coords.empty() ? "" : ";") + ccv.str();
                    r.witness_coords = coords;
                }
                rows.push_back(std::move(r));
            }
            return rows;
        }));
    }

    std::string csv =
        "chain_id,level,radius_exp2,lip_bound_mantissa,lip_bound_exp2,witness_ratio_mantissa,"
        "witness_ratio_exp2,witness_kind,witness_coords\n";
    json summary;
    summary["schema"] = "lipsharp-probe-v1";
    summary["depth"] = depth;
    summary["chains"] = json::array();
    for (std::size_t c = 0; c < futures.size(); ++c) {
        const auto rows = futures[c].get();
        json jc;
        jc["chain"] = io::chain_to_json(chains[c]);
        jc["rows"] = json::array();
        for (const auto& r : rows) {
            csv += std::to_string(r.chain_id) + "," + std::to_string(r.level) + "," +
                   std::to_string(r.radius_exp2) + "," + std::to_string(r.bound.m) + "," +
                   std::to_string(r.bound.e) + "," + std::to_string(r.ratio.m) + "," +
                   std::to_string(r.ratio.e) + "," + r.witness_kind + ",\"" + r.witness_coords +
                   "\"\n";
            jc["rows"].push_back({{"level", r.level},
                                  {"radius_exp2", r.radius_exp2},
                                  {"lip_bound", io::exp2_to_json(r.bound)},
                                  {"witness_ratio", io::exp2_to_json(r.ratio)},
                                  {"certified_bound", io::exp2_to_json(r.certified)},
                                  {"witness_kind", r.witness_kind}});
        }
        summary["chains"].push_back(jc);
    }
    write_file(outdir / "probe.csv", csv);
    write_file(outdir / "probe_summary.json", summary.dump(2));
    std::cout << "probe results written: " << (outdir / "probe.csv").string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

int cmd_verify(const RunConfig& cfg, const fs::path& outdir, const std::string& suite) {
    std::vector<Check> checks;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({name, pass, detail});
    };

    cubetree::ParamSequence p = make_params(cfg);
    if (suite != "none") {
        // parameter constraints (names match the construction's inequalities)
        const auto vs = validate_params(p);
        bool factor9 = true, growth = true, lemma = true, others = true;
        std::string detail;
        for (const auto& v : vs) {
            if (v.constraint.rfind("skipped:", 0) == 0) continue;
            if (v.constraint == "factor9") factor9 = false;
            else if (v.constraint == "growth") growth = false;
            else if (v.constraint == "lemma_a") lemma = false;
            else others = false;
            detail += "[" + v.constraint + " @" + std::to_string(v.level) + "] ";
        }
        add("factor-9 index growth", factor9, detail);
        add("growth inequality 2^{j_n-l_n} <= a_n", growth, detail);
        add("product lemma inequality for a_n", lemma, detail);
        add("sequence consistency", others, detail);

        if (p.mode() == cubetree::Mode::Strict) {
            add("nonempty selection at every level", [&] {
                for (int n = 0; n + 1 <= p.n_max(); ++n)
                    if (p.children_per_cube(n) <= 0) return false;
                return true;
            }(), "");
            add("running measure > 2^N e^{-2}",
                cubetree::measure_lower_bound_holds(p, p.n_max()), "");
        } else {
            // exhaustive geometry oracle at relaxed scale
            bool count_ok = true, gap_ok = true;
            const auto parent = cubetree::root_cube(p);
            BigInt brute = 0;
            const Dyadic child_half = Dyadic::pow2_neg(p.j(1));
            const Dyadic gap = Dyadic::pow2_neg(p.l(0));
            cubetree::for_each_selected_child(parent, p, [&](const std::vector<BigInt>& off) {
                brute += 1;
                BigInt ninf = 0;
                for (const auto& c : off) {
                    BigInt a = c < 0 ? BigInt(-c) : c;
                    if (a > ninf) ninf = a;
                }
                const Dyadic dist(ninf, p.j(1));
                if (dist - child_half - Dyadic::pow2_neg(p.l(0)) < gap) gap_ok = false;
                if (Dyadic::pow2_neg(p.j(0)) - dist - child_half < gap) gap_ok = false;
            });
            count_ok = brute == p.children_per_cube(0);
            add("children_count equals exhaustive enumeration", count_ok, "");
            add("2^{-l_n} gap to I_Q and boundary", gap_ok, "");
            const Dyadic vol = (Dyadic(2) * Dyadic::pow2_neg(p.j(1))).pow(
                static_cast<unsigned>(p.dim()));
            add("generation measure equals count-weighted volume",
                cubetree::generation_measure(1, p) == Dyadic(p.cardinality(1), 0) * vol, "");
        }

        // Lorentz core
        const auto lg = lorentz::log_capacity_profile(cfg.N);
        const auto n_fin = lorentz_norm(
            lg, lorentz::LorentzIndex(static_cast<double>(cfg.N), cfg.q_S));
        add("profile norm finite in S = L^{N,q_S}", n_fin.finite(), "");
        const auto n_div = lorentz_norm(lg, lorentz::LorentzIndex(static_cast<double>(cfg.N), 1.0));
        add("profile norm divergent at q = 1 (capacity degeneracy)", n_div.divergent(), "");
        add("profile monotone on the certified range", lorentz::spot_check_nonincreasing(lg), "");

        if (p.mode() == cubetree::Mode::Strict && !fatal_violations(validate_params(p))) {
            sharpfn::SharpExample ex(p, cfg.q_S);
            const auto rep = sharpfn::lip_field_norm_budget(ex);
            add("lip-field budget <= 2", rep.within_two, rep.total.str());
            std::mt19937_64 rng(cfg.seed);
            bool probes_ok = true, witnesses_ok = true;
            const int depth = std::min(cfg.depth, p.n_max() - 1);
            for (int c = 0; c < cfg.chains; ++c) {
                const auto chain = cubetree::random_selected_chain(p, depth, rng);
                const auto bounds = sharpfn::lip_probe(ex, chain, depth);
                for (std::size_t i = 1; i < bounds.size(); ++i)
                    probes_ok = probes_ok && bounds[i].bound < bounds[i - 1].bound;
                for (int lvl = 1; lvl <= depth; ++lvl) {
                    const auto w = sharpfn::nondiff_witness(ex, chain, lvl);
                    witnesses_ok = witnesses_ok && (w.ratio >= w.certified_bound);
                }
            }
            add("lip probe bounds strictly decreasing", probes_ok, "");
            add("witness ratios meet 2^{j_n/3}/(2 sqrt N)", witnesses_ok, "");
        }
    }

    json verdict;
    verdict["schema"] = "lipsharp-verify-v1";
    verdict["suite"] = suite;
    verdict["checks"] = json::array();
    bool all = true;
    std::size_t ran = 0;
    for (const auto& c : checks) {
        verdict["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all = all && c.pass;
        ++ran;
    }
    verdict["checks_run"] = ran;
    verdict["passed"] = all;
    if (ran == 0) verdict["note"] = "empty suite selection: zero checks run";
    write_file(outdir / "verify.json", verdict.dump(2));
    for (const auto& c : checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "\n";
    if (!all) {
        for (const auto& c : checks)
            if (!c.pass) std::cerr << "verification failed: " << c.name << "\n";
        return kExitVerifyFail;
    }
    std::cout << "verify: " << ran << " checks passed\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// plot

std::string svg_header(double w, double h) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                  "viewBox=\"0 0 %g %g\">\n",
                  w, h, w, h);
    return buf;
}

int cmd_plot(const RunConfig& cfg, const fs::path& outdir, std::vector<std::string> artifacts) {
    if (artifacts.empty()) artifacts = {"layout", "bounds", "witness"};
    if (artifacts.size() == 1 && artifacts[0] == "none") {
        std::cout << "no artifacts requested\n";
        return kExitOk;
    }
    const auto p = make_params(cfg);
    int written = 0;

    for (const auto& art : artifacts) {
        if (art == "layout") {
            if (cfg.N != 2) {
                std::cerr << "layout plots require N = 2\n";
                return kExitConfigError;
            }
            // parent cube [-1,1]^2 scaled to [20, 520]; inner cube and the
            // selected children of the root
            const double S = 250.0, O = 270.0;
            auto X = [&](const Dyadic& v) { return O + S * v.to_double(); };
            std::string svg = svg_header(540, 540);
            svg += "<rect x=\"20\" y=\"20\" width=\"500\" height=\"500\" fill=\"none\" "
                   "stroke=\"black\" stroke-width=\"1.5\"/>\n";
            const double ih = S * Dyadic::pow2_neg(p.l(0)).to_double();
            char buf[256];
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                          "fill=\"#cccccc\" stroke=\"black\" stroke-width=\"0.8\"/>\n",
                          O - ih, O - ih, 2 * ih, 2 * ih);
            svg += buf;
            const BigInt count = p.children_per_cube(0);
            if (count <= 4096) {
                const double ch = S * Dyadic::pow2_neg(p.j(1)).to_double();
                cubetree::for_each_selected_child(
                    cubetree::root_cube(p), p, [&](const std::vector<BigInt>& off) {
                        const Dyadic cx(off[0], p.j(1)), cy(off[1], p.j(1));
                        char b2[256];
                        std::snprintf(b2, sizeof(b2),
                                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                                      "fill=\"none\" stroke=\"#3366aa\" stroke-width=\"0.5\"/>\n",
                                      X(cx) - ch, X(cy) - ch, 2 * ch, 2 * ch);
                        svg += b2;
                    });
            } else {
                // too many to draw: show the admissible ring bounds instead
                const double lo = S * (Dyadic(2) * Dyadic::pow2_neg(p.l(0))).to_double();
                const double hi =
                    S * (Dyadic::pow2_neg(p.j(0)) - Dyadic::pow2_neg(p.l(0))).to_double();
                for (double r : {lo, hi}) {
                    char b2[256];
                    std::snprintf(b2, sizeof(b2),
                                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                                  "fill=\"none\" stroke=\"#3366aa\" stroke-dasharray=\"4 3\" "
                                  "stroke-width=\"0.8\"/>\n",
                                  O - r, O - r, 2 * r, 2 * r);
                    svg += b2;
                }
            }
            svg += "</svg>\n";
            write_file(outdir / "cube_layout.svg", svg);
            ++written;
        } else if (art == "bounds" || art == "witness") {
            // log2(bound or ratio) vs level as a simple polyline plot
            const int depth = std::min(cfg.depth, p.n_max() - 1);
            std::vector<double> ys;
            if (art == "bounds") {
                for (int n = 0; n <= depth; ++n)
                    ys.push_back(static_cast<double>(p.l(n) - p.k(n + 1)));
            } else {
                for (int n = 1; n <= depth + 1; ++n)
                    ys.push_back(static_cast<double>(p.j(n)) / 3.0 -
                                 std::log2(2.0 * std::sqrt(static_cast<double>(cfg.N))));
            }
            double ymin = ys[0], ymax = ys[0];
            for (double y : ys) {
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
            if (ymax == ymin) ymax = ymin + 1;
            std::string svg = svg_header(420, 320);
            svg += "<line x1=\"40\" y1=\"280\" x2=\"400\" y2=\"280\" stroke=\"black\"/>\n";
            svg += "<line x1=\"40\" y1=\"280\" x2=\"40\" y2=\"20\" stroke=\"black\"/>\n";
            std::string pts;
            for (std::size_t i = 0; i < ys.size(); ++i) {
                const double px = 40 + 340.0 * i / std::max<std::size_t>(1, ys.size() - 1);
                const double py = 280 - 250.0 * (ys[i] - ymin) / (ymax - ymin);
                pts += std::to_string(px) + "," + std::to_string(py) + " ";
                char b2[200];
                std::snprintf(b2, sizeof(b2),
                              "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3\" fill=\"#aa3322\"/>"
                              "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\">%.1f</text>\n",
                              px, py, px + 5, py - 5, ys[i]);
                svg += b2;
            }
            svg += "<polyline points=\"" + pts +
                   "\" fill=\"none\" stroke=\"#aa3322\" stroke-width=\"1.2\"/>\n";
            svg += "<text x=\"150\" y=\"310\" font-size=\"12\">level n (log2 scale values)</text>\n";
            svg += "</svg>\n";
            write_file(outdir / (art == "bounds" ? "lip_bounds.svg" : "witness_ratios.svg"), svg);
            ++written;
        } else if (art != "none") {
            std::cerr << "unknown artifact: " << art << "\n";
            return kExitConfigError;
        }
    }
    std::cout << written << " plot(s) written to " << outdir.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gradcheck

int cmd_gradcheck(const RunConfig& cfg, const fs::path& outdir, int trials) {
    // desk-scale harness on the capacity bump and random fields
    capacity::BumpSpec spec;
    spec.center = {Dyadic(0), Dyadic(0)};
    spec.eps = Exp2::from_double(0.6);
    spec.tau = Exp2::from_double(1.0);
    spec.N = 2;
    spec.profile = lorentz::log_capacity_profile(2);
    spec.norm_budget = Exp2::from_double(0.2);
    spec.q_S = cfg.q_S;
    const auto bump = capacity::make_bump(spec);
    auto radius = [](const std::vector<double>& x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return std::sqrt(r2);
    };
    auto f = [&](const std::vector<double>& x) {
        return capacity::eval_bump_radial(bump, radius(x));
    };
    const auto lipfield = gradcheck::GridField::sample(2, 129, [&](const std::vector<double>& x) {
        return capacity::bump_lip_radial(bump, radius(x));
    });

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> nv(2, 5), cd(-2047, 2047);
    json report;
    report["schema"] = "lipsharp-gradcheck-v1";
    double min_slack = 1e300;
    bool all_hold = true;
    json chain_runs = json::array();
    for (int t = 0; t < trials; ++t) {
        std::vector<std::vector<double>> pts;
        const int n = nv(rng);
        while (static_cast<int>(pts.size()) < n) {
            std::vector<double> pnt{(2 * cd(rng) + 1) / 4096.0, (2 * cd(rng) + 1) / 4096.0};
            if (pts.empty() || pnt != pts.back()) pts.push_back(pnt);
        }
        const gradcheck::PolyCurve curve(std::move(pts));
        const auto rep = gradcheck::chain_inequality(f, lipfield, curve, 64);
        all_hold = all_hold && rep.holds;
        min_slack = std::min(min_slack, rep.slack);
        if (t < 10)
            chain_runs.push_back({{"lhs", rep.lhs},
                                  {"rhs", rep.rhs},
                                  {"telescope", rep.telescope_bound},
                                  {"slack", rep.slack},
                                  {"holds", rep.holds}});
    }
    report["chaining"] = {{"trials", trials},
                          {"all_hold", all_hold},
                          {"min_slack", min_slack},
                          {"sample_runs", chain_runs}};

    const auto M = gradcheck::maximal_function(lipfield, cfg.q_S, {0.125, 0.25, 0.5, 1.0});
    bool mq_ge = true;
    for (std::size_t i = 0; i < M.size(); ++i) mq_ge = mq_ge && M[i] >= lipfield[i];
    std::uniform_int_distribution<std::size_t> node(0, M.size() - 1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    while (pairs.size() < 10000) {
        const auto a = node(rng), b = node(rng);
        if (a != b) pairs.emplace_back(a, b);
    }
    const double cmin = gradcheck::minimal_hajlasz_constant(f, M, pairs);
    const bool haj_ok = gradcheck::hajlasz_pair_check(f, M, pairs, cmin * (1.0 + 1e-12)).empty();
    report["maximal"] = {{"M_ge_g", mq_ge}};
    report["hajlasz"] = {{"pairs", pairs.size()}, {"minimal_C", cmin}, {"passes_at_minimal_C", haj_ok}};

    write_file(outdir / "gradcheck_report.json", report.dump(2));
    std::cout << "gradcheck report written; min chaining slack = " << min_slack
              << ", minimal hajlasz C = " << cmin << "\n";
    return (all_hold && mq_ge && haj_ok) ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"construct and verify the sharp lip-differentiability example"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", suite = "default", chain_file;
    int depth_flag = -1, trials = 100;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;
    std::vector<std::string> artifacts;
    std::string mode_flag;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed_flag, "override the config RNG seed")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--mode", mode_flag, "override mode: strict|relaxed");
        sub->add_option("--depth", depth_flag, "probe/verification depth cap");
    };

    auto* construct = app.add_subcommand("construct", "emit the construction manifest");
    add_common(construct);
    auto* probe = app.add_subcommand("probe", "lip bounds and witness ratios along chains");
    add_common(probe);
    probe->add_option("--chain", chain_file, "probe one chain from a JSON file");
    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    add_common(verify);
    verify->add_option("--suite", suite, "suite selection: default|none");
    auto* plot = app.add_subcommand("plot", "emit SVG artifacts");
    add_common(plot);
    plot->add_option("--artifact", artifacts, "layout|bounds|witness|none (repeatable)");
    auto* grad = app.add_subcommand("gradcheck", "chaining / maximal / pairwise harness");
    add_common(grad);
    grad->add_option("--trials", trials, "number of random polylines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfigError;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (seed_given) cfg.seed = seed_flag;
        if (!mode_flag.empty()) {
            if (mode_flag != "strict" && mode_flag != "relaxed")
                throw ConfigError("mode override must be strict|relaxed");
            cfg.mode = mode_flag == "strict" ? cubetree::Mode::Strict : cubetree::Mode::Relaxed;
        }
        const fs::path outdir(out_dir);
        if (construct->parsed()) return cmd_construct(cfg, outdir);
        if (probe->parsed()) return cmd_probe(cfg, outdir, depth_flag, chain_file);
        if (verify->parsed()) return cmd_verify(cfg, outdir, suite);
        if (plot->parsed()) return cmd_plot(cfg, outdir, artifacts);
        if (grad->parsed()) return cmd_gradcheck(cfg, outdir, trials);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFail;
    }
    return kExitOk;
}
