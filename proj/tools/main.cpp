#include "normcount/arith.hpp"
#include "normcount/config.hpp"
#include "normcount/engine.hpp"
#include "normcount/errors.hpp"
#include "normcount/fields.hpp"
#include "normcount/forms.hpp"
#include "normcount/lattices.hpp"
#include "normcount/regions.hpp"
#include "normcount/series.hpp"
#include "normcount/sieve.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace normcount;

namespace {

struct Sources {
    std::string config;
    std::string field;
    std::string form;
    std::string strategy;
    std::string negative_norms;
    int threads = -1;
};

void add_sources(CLI::App* cmd, Sources& src, bool engine = true) {
    cmd->add_option("--config", src.config, "config file with any of [field], [form], [engine]");
    cmd->add_option("--field", src.field, "config file with a [field] section");
    cmd->add_option("--form", src.form, "config file with a [form] section");
    if (engine) {
        cmd->add_option("--strategy", src.strategy, "automatic | naive | spf_table | row_sieve");
        cmd->add_option("--threads", src.threads, "worker threads, 0 = all cores");
        cmd->add_option("--negative-norms", src.negative_norms, "auto | assume_ok | reject");
    }
}

Config resolve(const Sources& src) {
    Config cfg;
    if (!src.config.empty()) cfg = load_config(src.config);
    if (!src.field.empty()) {
        const Config f = load_config(src.field);
        if (!f.field) throw InvalidArgument("no [field] section in " + src.field);
        cfg.field = f.field;
        cfg.negative_norms = f.negative_norms;
    }
    if (!src.form.empty()) {
        const Config f = load_config(src.form);
        if (!f.form) throw InvalidArgument("no [form] section in " + src.form);
        cfg.form = f.form;
    }
    if (!src.strategy.empty()) cfg.sweep.strategy = parse_strategy(src.strategy);
    if (src.threads >= 0) cfg.sweep.threads = static_cast<unsigned>(src.threads);
    if (!src.negative_norms.empty()) cfg.negative_norms = parse_negative_norms(src.negative_norms);
    cfg.pipeline.sweep = cfg.sweep;
    return cfg;
}

const FieldSpec& need_field(const Config& cfg) {
    if (!cfg.field) throw InvalidArgument("no [field] section given (use --field or --config)");
    return *cfg.field;
}

const FormSpec& need_form(const Config& cfg) {
    if (!cfg.form) throw InvalidArgument("no [form] section given (use --form or --config)");
    return *cfg.form;
}

std::vector<i64> box_sizes(const std::vector<i64>& cli, const Config& cfg) {
    if (!cli.empty()) return cli;
    if (cfg.B) return {*cfg.B};
    throw InvalidArgument("no box size given (use --B or [engine] B)");
}

std::string num(double x) {
    std::ostringstream ss;
    ss.precision(12);
    ss << x;
    return ss.str();
}

std::vector<std::pair<double, double>> read_counts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("'" + path + "' is empty");
    // header: locate the B and N columns
    std::vector<std::string> head;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) head.push_back(cell);
    }
    int ib = -1, in_ = -1;
    for (int i = 0; i < static_cast<int>(head.size()); ++i) {
        if (head[i] == "B") ib = i;
        if (head[i] == "N" || head[i] == "count" || head[i] == "exact_norm") in_ = in_ < 0 ? i : in_;
    }
    if (ib < 0 || in_ < 0) throw InvalidArgument("counts file needs a header with B and N (or count) columns");
    std::vector<std::pair<double, double>> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (static_cast<int>(cells.size()) <= std::max(ib, in_)) throw InvalidArgument("short row: " + line);
        try {
            out.push_back({std::stod(cells[ib]), std::stod(cells[in_])});
        } catch (const std::exception&) {
            throw InvalidArgument("bad row: " + line);
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Counting values of binary quadratic forms that are norms from abelian fields"};
    app.require_subcommand(1);

    // count
    Sources count_src;
    std::vector<i64> count_B;
    std::string count_mode = "exact_norm";
    auto* count = app.add_subcommand("count", "count (s, t) in [-B, B]^2 with F(s, t) a norm");
    add_sources(count, count_src);
    count->add_option("--B", count_B, "box size(s)")->delimiter(',');
    count->add_option("--mode", count_mode, "exact_norm | squarefree_detector | all");

    // sieve-pipeline
    Sources pipe_src;
    std::vector<i64> pipe_B;
    double pipe_eps0 = 0, pipe_eta = 0;
    auto* pipe = app.add_subcommand("sieve-pipeline", "lower-bound pipeline: direct minorant against the sieve bound");
    add_sources(pipe, pipe_src);
    pipe->add_option("--B", pipe_B, "box size(s)")->delimiter(',');
    pipe->add_option("--eps0", pipe_eps0, "sieve level exponent (default 1/(8n^2))");
    pipe->add_option("--eta", pipe_eta, "prime cutoff exponent (default 1/(16n^2))");

    // series
    Sources series_src;
    double series_y = 1e6;
    u64 series_a = 1, series_k1 = 1, series_P = 10'000'000;
    auto* series = app.add_subcommand("series", "truncated sum S(y, a, k1; v0) against its Euler-product limit");
    add_sources(series, series_src, false);
    series->add_option("--y", series_y, "truncation point");
    series->add_option("--a", series_a, "a");
    series->add_option("--k1", series_k1, "k1");
    series->add_option("--P", series_P, "Euler product cutoff");

    // lattice
    Sources lat_src;
    u64 lat_k = 1;
    i64 lat_B = 0;
    double lat_z = 0;
    i64 lat_xi = -1;
    u64 lat_W = 1;
    auto* lat = app.add_subcommand("lattice", "shortest vectors and congruence lattice counts");
    add_sources(lat, lat_src, false);
    lat->add_option("--k", lat_k, "modulus k (squarefree, coprime to W)");
    lat->add_option("--xi", lat_xi, "single root xi: print the reduced lattice only");
    lat->add_option("--B", lat_B, "box size for the count");
    lat->add_option("--z", lat_z, "lower bound on |F|");
    lat->add_option("--W", lat_W, "class modulus (base point found automatically when W > 1)");

    // volume
    Sources vol_src;
    double vol_B = 1, vol_z = 0, vol_z2 = -1;
    auto* vol = app.add_subcommand("volume", "area of {(s, t) in [-B, B]^2 : |F(s, t)| >= z}");
    add_sources(vol, vol_src, false);
    vol->add_option("--B", vol_B, "box size")->required();
    vol->add_option("--z", vol_z, "level z");
    vol->add_option("--z2", vol_z2, "second level: also print the strip z <= |F| < z2");

    // fit
    std::string fit_input;
    int fit_r = 0, fit_n = 0;
    auto* fit = app.add_subcommand("fit", "normalized constants c_B = N (log B)^{1 - r/n} / B^2");
    fit->add_option("--input", fit_input, "CSV with B and N columns")->required();
    fit->add_option("--r", fit_r, "r")->required();
    fit->add_option("--n", fit_n, "n")->required();

    // report
    Sources rep_src;
    auto* rep = app.add_subcommand("report", "field, form and sieve setup summary");
    add_sources(rep, rep_src, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    std::ostringstream out;
    try {
        if (*count) {
            const Config cfg = resolve(count_src);
            const AbelianField L(need_field(cfg));
            const FormSpec& F = need_form(cfg);
            const auto Bs = box_sizes(count_B, cfg);
            if (count_mode == "all") {
                SweepConfig sc = cfg.sweep;
                sc.W = compute_W(L, F, cfg.pipeline.w0_min).W;
                sc.base = find_base_point(L, F, sc.W);
                out << "B,points,exact_norm,squarefree_detector,loc_upper,varpi_sum\n";
                for (const auto& c : count_all(L, F, Bs, sc, cfg.negative_norms)) {
                    out << c.B << ',' << c.points << ',' << c.exact_norm << ',' << c.detector << ','
                              << c.loc_upper << ',' << c.varpi_sum << '\n';
                }
            } else {
                const CountMode mode = parse_count_mode(count_mode);
                SweepConfig sc = cfg.sweep;
                if (mode == CountMode::squarefree_detector) {
                    sc.W = compute_W(L, F, cfg.pipeline.w0_min).W;
                    sc.base = find_base_point(L, F, sc.W);
                }
                out << "B,mode,count\n";
                for (i64 B : Bs) {
                    sc.B = B;
                    out << B << ',' << to_string(mode) << ','
                              << count_NFL(L, F, sc, mode, cfg.negative_norms) << '\n';
                }
            }
        } else if (*pipe) {
            Config cfg = resolve(pipe_src);
            const AbelianField L(need_field(cfg));
            const FormSpec& F = need_form(cfg);
            if (pipe_eps0 > 0) cfg.pipeline.eps0 = pipe_eps0;
            if (pipe_eta > 0) cfg.pipeline.eta = pipe_eta;
            out << "B,direct,sieved,predicted_order,ratio,inequality_holds,z,y,W,reducible\n";
            for (i64 B : box_sizes(pipe_B, cfg)) {
                const auto r = lower_bound_pipeline(L, F, B, cfg.pipeline);
                out << B << ',' << num(r.direct) << ',' << num(r.sieved) << ',' << num(r.predicted_order) << ','
                          << num(r.ratio) << ',' << (r.inequality_holds ? "true" : "false") << ',' << num(r.z) << ','
                          << num(r.y) << ',' << r.W << ',' << (r.reducible ? "true" : "false") << '\n';
            }
        } else if (*series) {
            const Config cfg = resolve(series_src);
            const AbelianField L(need_field(cfg));
            const FormSpec& F = need_form(cfg);
            const u64 W = compute_W(L, F, cfg.pipeline.w0_min).W;
            const auto v0 = v0_weight();
            const auto c = c_FL(L, F, v0, W, series_P);
            const double u = u_FL(L, F, v0, W, factor(series_a * series_k1));
            const auto sig = sigma_k(L, F, series_k1, series_a, v0, W, 1'000'000'000);
            const double S = frakS(L, F, series_y, series_a, series_k1, v0, W);
            const double target = c.value * u * sig.value;
            const std::string y = num(series_y), P = std::to_string(series_P);
            out << "quantity,cutoff,value,tail_bound\n";
            out << "c_FL," << P << ',' << num(c.value) << ',' << num(c.tail) << '\n';
            out << "u_FL,," << num(u) << ",0\n";
            out << "sigma_k1,1e9," << num(sig.value) << ',' << num(sig.tail) << '\n';
            out << "sigma_k1_product,," << num(sigma_k_product(L, F, series_k1, series_a, W)) << ",0\n";
            out << "frakS," << y << ',' << num(S) << ",\n";
            out << "target,," << num(target) << ",\n";
            out << "relative_error," << y << ',' << num(std::abs(S - target) / std::abs(target)) << ",\n";
        } else if (*lat) {
            if (lat_xi >= 0) {
                const auto r = lambda1(lat_k, lat_xi);
                out << "k,xi,lambda1,s,t,b1s,b1t,b2s,b2t\n";
                out << lat_k << ',' << lat_xi << ',' << num(r.lambda1) << ',' << r.s << ',' << r.t << ','
                          << r.b1s << ',' << r.b1t << ',' << r.b2s << ',' << r.b2t << '\n';
            } else {
                const Config cfg = resolve(lat_src);
                const FormSpec& F = need_form(cfg);
                if (lat_B < 1) throw InvalidArgument("lattice: --B is required for counts");
                BasePoint base{0, 0};
                if (lat_W > 1) base = find_base_point(AbelianField(need_field(cfg)), F, lat_W);
                const u64 cnt = lambda_star_count(F, lat_B, lat_z, lat_k, base, lat_W);
                const double est = lambda_star_estimate(F, lat_B, lat_z, lat_k, lat_W);
                out << "B,z,k,W,count,estimate,relative_error\n";
                out << lat_B << ',' << num(lat_z) << ',' << lat_k << ',' << lat_W << ',' << cnt << ','
                          << num(est) << ',' << num(std::abs(static_cast<double>(cnt) - est) / est) << '\n';
            }
        } else if (*vol) {
            const Config cfg = resolve(vol_src);
            const FormSpec& F = need_form(cfg);
            out << "quantity,value\n";
            out << "vol_region," << num(vol_region(F, vol_B, vol_z)) << '\n';
            out << "vol_region_quadrature," << num(vol_region_quadrature(F, vol_B, vol_z)) << '\n';
            if (F.b == 0) out << "vol_region_closed_form," << num(vol_region_closed_form(F, vol_B, vol_z)) << '\n';
            if (F.disc() < 0) out << "definite_unit_area," << num(definite_unit_area(F)) << '\n';
            if (F.disc() > 0 && vol_z > 0) {
                out << "sublevel_area_bound," << num(sublevel_area_bound(F, vol_B, vol_z)) << '\n';
            }
            if (vol_z2 > vol_z && vol_z > 0) out << "delta_vol," << num(delta_vol(F, vol_B, vol_z, vol_z2)) << '\n';
        } else if (*fit) {
            const auto pts = read_counts(fit_input);
            const auto res = asymptotic_fit(pts, fit_r, fit_n);
            out << "B,N,c_B,spread\n";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                out << num(pts[i].first) << ',' << num(pts[i].second) << ',' << num(res.c[i]) << ','
                          << num(res.spread) << '\n';
            }
        } else if (*rep) {
            const Config cfg = resolve(rep_src);
            const AbelianField L(need_field(cfg));
            out << "key,value\n";
            out << "field," << field_to_string(L.spec()) << '\n';
            out << "degree," << L.degree() << '\n';
            out << "totally_real," << (L.is_totally_real() ? "true" : "false") << '\n';
            out << "pid," << (L.spec().pid ? "true" : "false") << '\n';
            out << "conductor_discriminant," << L.conductor_discriminant() << '\n';
            for (std::size_t i = 0; i < L.characters().size(); ++i) {
                const auto& ch = L.characters()[i];
                out << "character_" << i << ",order " << ch.order << " conductor " << ch.conductor << '\n';
            }
            if (cfg.form) {
                const FormSpec& F = *cfg.form;
                const int r = factor_count_over_L(L, F);
                out << "form," << F.to_string() << '\n';
                out << "disc," << F.disc() << '\n';
                out << "b_F," << num(b_F(F)) << '\n';
                out << "r," << r << '\n';
                out << "exponent," << num(1.0 - static_cast<double>(r) / L.degree()) << '\n';
                const auto W = compute_W(L, F, cfg.pipeline.w0_min);
                out << "w0," << W.w0 << '\n';
                out << "W," << W.W << '\n';
                const auto base = find_base_point(L, F, W.W);
                out << "base_point,(" << base.s << " " << base.t << ")\n";
                if (r == 2) {
                    try {
                        const std::string l0 = field_to_string(construct_L0(L, F));
                        out << "L0," << l0 << '\n';
                    } catch (const HypothesisError& e) {
                        out << "L0,unavailable: " << e.what() << '\n';
                    }
                }
            }
        }
        std::cout << out.str();
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violated: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
