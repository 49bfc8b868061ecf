// SPDX-License-Identifier: Apache-2.0

#include "distmimo/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "distmimo/analysis.hpp"

namespace distmimo {

void parallel_for(int n_tasks, int workers, const std::function<void(int)>& fn) {
    if (n_tasks <= 0) return;
    workers = std::max(1, std::min(workers, n_tasks));
    if (workers == 1) {
        for (int i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mtx;
    std::exception_ptr err;
    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_tasks) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

std::string version_string() { return "distmimo 0.1.0"; }

namespace {

constexpr std::uint64_t kParamStream = 0x64726177ULL;  // sweep-point parameter draws
constexpr std::uint64_t kPilotStream = 0x70697363ULL;  // pilot noise substream

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int scheme_code(Scheme s) { return static_cast<int>(s); }

int hardware_case_code(const std::string& name) {
    if (name == "ideal") return 0;
    if (name == "ue-only") return 1;
    if (name == "bs-only") return 2;
    return 3;  // ue-bs
}

ChannelModel base_model(const ScenarioConfig& c) {
    ChannelModel m;
    m.kind = fading_kind_from_string(c.channel_kind);
    m.M = c.M;
    m.K = c.K;
    m.angular_std_deg = c.angular_std_deg;
    m.antenna_spacing = c.antenna_spacing;
    m.ue_angles_deg = c.ue_angles_deg;
    m.p = 1.0;
    m.sigma2 = 1.0;
    if (!c.snr.is_range)
        m.ue_snrs.assign(c.K, db_to_lin(c.snr.value_db));
    return m;
}

/// Fills in the per-realization random parameters: UE SNRs drawn from the
/// configured dB range and, for ULA models without fixed angles, UE angles
/// uniform in [-60, 60] degrees.
void randomize_model(ChannelModel& m, const SnrSpec& snr, Rng& rng) {
    if (snr.is_range) {
        m.ue_snrs.resize(m.K);
        for (int k = 0; k < m.K; ++k)
            m.ue_snrs[k] = db_to_lin(snr.lo_db + rng.uniform() * (snr.hi_db - snr.lo_db));
    }
    const bool ula = m.kind != FadingKind::IidRayleigh;
    if (ula && m.ue_angles_deg.empty()) {
        m.ue_angles_deg.resize(m.K);
        for (int k = 0; k < m.K; ++k)
            m.ue_angles_deg[k] = -60.0 + 120.0 * rng.uniform();
    }
}

ScenarioConfig apply_sweep(const ScenarioConfig& c, double v) {
    ScenarioConfig out = c;
    const std::string& var = c.sweep->variable;
    if (var == "k") {
        out.K = static_cast<int>(v);
        out.ue_angles_deg.clear();
    } else if (var == "m") {
        out.M = static_cast<int>(v);
    } else if (var == "b") {
        out.frontend.bits = static_cast<int>(v);
    } else {
        out.snr = SnrSpec{false, v, 0.0, 0.0};
    }
    return out;
}

std::vector<Scheme> parse_schemes(const ScenarioConfig& c) {
    std::vector<Scheme> out;
    for (const auto& s : c.schemes) out.push_back(scheme_from_string(s));
    return out;
}

std::vector<bool> corr_flags(const ScenarioConfig& c) {
    std::vector<bool> out;
    if (c.wants_corr()) out.push_back(true);
    if (c.wants_uncorr()) out.push_back(false);
    return out;
}

struct PointStats {
    Vec mean;
    Vec stderr_;
};

PointStats reduce_mean(const std::vector<std::vector<double>>& per, int width) {
    const int n = static_cast<int>(per.size());
    Vec sum = Vec::Zero(width), sumsq = Vec::Zero(width);
    for (const auto& row : per)
        for (int i = 0; i < width; ++i) {
            sum(i) += row[i];
            sumsq(i) += row[i] * row[i];
        }
    PointStats st;
    st.mean = sum / n;
    st.stderr_.resize(width);
    for (int i = 0; i < width; ++i) {
        const double var = std::max(sumsq(i) / n - st.mean(i) * st.mean(i), 0.0);
        st.stderr_(i) = std::sqrt(var / n);
    }
    return st;
}

/// Draws one realization under the point configuration, with the random
/// parameters (SNRs/angles) resolved from a dedicated substream.
Realization draw_point_realization(const ScenarioConfig& pc, std::uint64_t rseed,
                                   ChannelModel& model_out, FrontEnd& fe_out) {
    ChannelModel m = base_model(pc);
    Rng param_rng(substream_seed(rseed, kParamStream));
    randomize_model(m, pc.snr, param_rng);
    m.validate();
    SimSetup setup{m, pc.frontend, pc.kappa, pc.mc_samples};
    FrontEnd fe = pc.frontend.build(m.M, m.antenna_power());
    Realization real = make_realization(setup, fe, rseed);
    model_out = std::move(m);
    fe_out = std::move(fe);
    return real;
}

void run_se(const ScenarioConfig& cfg, int workers, ResultTable& table) {
    const auto schemes = parse_schemes(cfg);
    const auto corrs = corr_flags(cfg);
    table.columns = {cfg.sweep->variable, "scheme", "corr", "ue", "se", "se-stderr"};
    for (size_t vi = 0; vi < cfg.sweep->values.size(); ++vi) {
        const double v = cfg.sweep->values[vi];
        const ScenarioConfig pc = apply_sweep(cfg, v);
        const std::uint64_t vseed = substream_seed(cfg.seed, vi + 1);
        const int width = static_cast<int>(schemes.size() * corrs.size()) * pc.K;
        std::vector<std::vector<double>> per(cfg.realizations);
        parallel_for(cfg.realizations, workers, [&](int r) {
            ChannelModel m;
            FrontEnd fe;
            const Realization real =
                draw_point_realization(pc, substream_seed(vseed, r), m, fe);
            SimSetup setup{m, pc.frontend, pc.kappa, pc.mc_samples};
            std::vector<double>& out = per[r];
            out.reserve(width);
            for (Scheme s : schemes)
                for (bool corr : corrs) {
                    const auto bds = realization_sinr(real, setup, s, !corr);
                    for (int k = 0; k < pc.K; ++k)
                        out.push_back(std::log2(1.0 + bds[k].sinr));
                }
        });
        const PointStats st = reduce_mean(per, width);
        int idx = 0;
        for (Scheme s : schemes)
            for (bool corr : corrs)
                for (int k = 0; k < pc.K; ++k, ++idx)
                    table.add_row({v, double(scheme_code(s)), corr ? 1.0 : 0.0,
                                   double(k), st.mean(idx), st.stderr_(idx)});
    }
}

void run_averaged_sinr(const ScenarioConfig& cfg, int workers, ResultTable& table) {
    const auto schemes = parse_schemes(cfg);
    const auto corrs = corr_flags(cfg);
    table.columns = {"snr-db", "scheme", "corr", "perfect-csi", "ue", "sinr"};
    for (size_t vi = 0; vi < cfg.sweep->values.size(); ++vi) {
        const double v = cfg.sweep->values[vi];
        const ScenarioConfig pc = apply_sweep(cfg, v);
        const std::uint64_t vseed = substream_seed(cfg.seed, vi + 1);
        const int combos = static_cast<int>(schemes.size() * corrs.size()) * 2;
        const int width = combos * pc.K * 2;  // numerator and denominator sums
        std::vector<std::vector<double>> per(cfg.realizations);
        parallel_for(cfg.realizations, workers, [&](int r) {
            const std::uint64_t rseed = substream_seed(vseed, r);
            ChannelModel m;
            FrontEnd fe;
            const Realization real = draw_point_realization(pc, rseed, m, fe);
            SimSetup setup{m, pc.frontend, pc.kappa, pc.mc_samples};
            Rng pilot_rng(substream_seed(rseed, kPilotStream));
            const CMat h_hat = estimate_channel_ls(real, setup, fe, pilot_rng);

            std::vector<double>& out = per[r];
            out.reserve(width);
            for (Scheme s : schemes)
                for (int csi = 1; csi >= 0; --csi) {
                    CombinerInputs in;
                    in.p = m.p;
                    in.sigma2 = m.sigma2;
                    in.C_etaeta = real.bd.C_etaeta;
                    in.channel_gain.resize(pc.K);
                    for (int k = 0; k < pc.K; ++k)
                        in.channel_gain(k) = m.channel_gain(k);
                    if (csi) {
                        in.H = real.ch.H;
                        in.d = real.bd.d;
                    } else {
                        // The LS estimate approximates the effective channel
                        // D h_k; the receiver has no separate gain knowledge.
                        in.H = h_hat;
                        in.d = CVec::Ones(pc.M);
                    }
                    const CombinerSet cs = build_combiner(s, in);
                    for (bool corr : corrs) {
                        const CMat c_eta =
                            corr ? real.bd.C_etaeta
                                 : CMat(real.bd.C_etaeta.diagonal().asDiagonal());
                        for (int k = 0; k < pc.K; ++k) {
                            const auto b = sinr(cs.V.col(k), k, real.ch.H, real.bd.d,
                                                c_eta, m.p, m.sigma2, pc.kappa);
                            out.push_back(b.signal);
                            out.push_back(b.interference + b.ue_distortion +
                                          b.bs_distortion + b.noise);
                        }
                    }
                }
        });
        Vec sum = Vec::Zero(width);
        for (const auto& row : per)
            for (int i = 0; i < width; ++i) sum(i) += row[i];
        int idx = 0;
        for (Scheme s : schemes)
            for (int csi = 1; csi >= 0; --csi)
                for (bool corr : corrs)
                    for (int k = 0; k < pc.K; ++k, idx += 2)
                        table.add_row({v, double(scheme_code(s)), corr ? 1.0 : 0.0,
                                       double(csi), double(k),
                                       sum(idx) / sum(idx + 1)});
    }
}

void run_distortion_terms(const ScenarioConfig& cfg, ResultTable& table) {
    table.columns = {"k", "bs-corr-over-noise", "bs-uncorr-over-noise",
                     "ue-over-noise"};
    for (double v : cfg.sweep->values) {
        ClosedFormInputs in;
        in.M = cfg.M;
        in.K = static_cast<int>(v);
        in.alpha = cfg.frontend.alpha;
        in.b_off = db_to_lin(cfg.frontend.b_off_db);
        in.p = db_to_lin(cfg.snr.value_db);
        in.sigma2 = 1.0;
        in.kappa = cfg.kappa;
        table.add_row({v, bs_distortion_mr_corr(in) / in.sigma2,
                       bs_distortion_mr_uncorr(in) / in.sigma2,
                       (1.0 - in.kappa) * in.p * ue_distortion_mr(in) / in.sigma2});
    }
}

void run_signal_distortion_vs_m(const ScenarioConfig& cfg, int workers,
                                ResultTable& table) {
    const auto schemes = parse_schemes(cfg);
    table.columns = {"m", "scheme", "ue", "signal", "signal-stderr",
                     "bs-distortion", "bs-distortion-stderr"};
    for (size_t vi = 0; vi < cfg.sweep->values.size(); ++vi) {
        const double v = cfg.sweep->values[vi];
        const ScenarioConfig pc = apply_sweep(cfg, v);
        const std::uint64_t vseed = substream_seed(cfg.seed, vi + 1);
        const int width = static_cast<int>(schemes.size()) * pc.K * 2;
        std::vector<std::vector<double>> per(cfg.realizations);
        parallel_for(cfg.realizations, workers, [&](int r) {
            ChannelModel m;
            FrontEnd fe;
            const Realization real =
                draw_point_realization(pc, substream_seed(vseed, r), m, fe);
            CombinerInputs in;
            in.H = real.ch.H;
            in.d = real.bd.d;
            in.C_etaeta = real.bd.C_etaeta;
            in.p = m.p;
            in.sigma2 = m.sigma2;
            in.channel_gain.resize(pc.K);
            for (int k = 0; k < pc.K; ++k) in.channel_gain(k) = m.channel_gain(k);
            std::vector<double>& out = per[r];
            out.reserve(width);
            for (Scheme s : schemes) {
                const CombinerSet cs = build_combiner(s, in);
                for (int k = 0; k < pc.K; ++k) {
                    const auto b = sinr(cs.V.col(k), k, real.ch.H, real.bd.d,
                                        real.bd.C_etaeta, m.p, m.sigma2, pc.kappa);
                    out.push_back(b.signal / m.sigma2);
                    out.push_back(b.bs_distortion / m.sigma2);
                }
            }
        });
        const PointStats st = reduce_mean(per, width);
        int idx = 0;
        for (Scheme s : schemes)
            for (int k = 0; k < pc.K; ++k, idx += 2)
                table.add_row({v, double(scheme_code(s)), double(k), st.mean(idx),
                               st.stderr_(idx), st.mean(idx + 1), st.stderr_(idx + 1)});
    }
}

void run_eigenvalues(const ScenarioConfig& cfg, int workers, ResultTable& table) {
    table.columns = {"k", "index", "eigenvalue"};
    for (size_t vi = 0; vi < cfg.sweep->values.size(); ++vi) {
        const double v = cfg.sweep->values[vi];
        const ScenarioConfig pc = apply_sweep(cfg, v);
        const std::uint64_t vseed = substream_seed(cfg.seed, vi + 1);
        std::vector<std::vector<double>> per(cfg.realizations);
        parallel_for(cfg.realizations, workers, [&](int r) {
            ChannelModel m;
            FrontEnd fe;
            const Realization real =
                draw_point_realization(pc, substream_seed(vseed, r), m, fe);
            Eigen::SelfAdjointEigenSolver<CMat> es(real.bd.C_etaeta);
            Vec ev = es.eigenvalues().reverse();
            const double tr = std::max(ev.sum(), 1e-300);
            per[r].assign(ev.data(), ev.data() + ev.size());
            for (double& x : per[r]) x /= tr;
        });
        const PointStats st = reduce_mean(per, pc.M);
        for (int i = 0; i < pc.M; ++i)
            table.add_row({v, double(i + 1), st.mean(i)});
    }
}

void run_se_cdf(const ScenarioConfig& cfg, int workers, ResultTable& table) {
    const auto schemes = parse_schemes(cfg);
    const auto corrs = corr_flags(cfg);
    table.columns = {"model", "scheme", "corr", "draw", "ue", "se"};
    for (size_t ci = 0; ci < cfg.channel_kinds.size(); ++ci) {
        ScenarioConfig pc = cfg;
        pc.channel_kind = cfg.channel_kinds[ci];
        const std::uint64_t cseed = substream_seed(cfg.seed, ci + 1);
        const int width = static_cast<int>(schemes.size() * corrs.size()) * pc.K;
        std::vector<std::vector<double>> per(cfg.realizations);
        parallel_for(cfg.realizations, workers, [&](int r) {
            ChannelModel m;
            FrontEnd fe;
            const Realization real =
                draw_point_realization(pc, substream_seed(cseed, r), m, fe);
            SimSetup setup{m, pc.frontend, pc.kappa, pc.mc_samples};
            std::vector<double>& out = per[r];
            out.reserve(width);
            for (Scheme s : schemes)
                for (bool corr : corrs) {
                    const auto bds = realization_sinr(real, setup, s, !corr);
                    for (int k = 0; k < pc.K; ++k)
                        out.push_back(std::log2(1.0 + bds[k].sinr));
                }
        });
        for (int r = 0; r < cfg.realizations; ++r) {
            int idx = 0;
            for (Scheme s : schemes)
                for (bool corr : corrs)
                    for (int k = 0; k < pc.K; ++k, ++idx)
                        table.add_row({double(ci), double(scheme_code(s)),
                                       corr ? 1.0 : 0.0, double(r), double(k),
                                       per[r][idx]});
        }
    }
}

void run_asymptotic_se(const ScenarioConfig& cfg, int workers, ResultTable& table) {
    const auto schemes = parse_schemes(cfg);
    const auto corrs = corr_flags(cfg);
    table.columns = {"m", "case", "scheme", "corr", "ue", "se", "se-stderr"};
    for (size_t vi = 0; vi < cfg.sweep->values.size(); ++vi) {
        const double v = cfg.sweep->values[vi];
        for (size_t hi = 0; hi < cfg.hardware_cases.size(); ++hi) {
            const std::string& hc = cfg.hardware_cases[hi];
            ScenarioConfig pc = apply_sweep(cfg, v);
            // Quantization is neglected in the asymptotic study; the BS is
            // either ideal or third-order only.
            const bool bs_nonideal = hc == "bs-only" || hc == "ue-bs";
            const bool ue_nonideal = hc == "ue-only" || hc == "ue-bs";
            pc.frontend.kind = bs_nonideal ? "third-order" : "identity";
            pc.kappa = ue_nonideal ? cfg.kappa : 1.0;
            const std::uint64_t vseed =
                substream_seed(cfg.seed, (vi + 1) * 64 + hi);
            const int width = static_cast<int>(schemes.size() * corrs.size()) * pc.K;
            std::vector<std::vector<double>> per(cfg.realizations);
            parallel_for(cfg.realizations, workers, [&](int r) {
                ChannelModel m;
                FrontEnd fe;
                const Realization real =
                    draw_point_realization(pc, substream_seed(vseed, r), m, fe);
                SimSetup setup{m, pc.frontend, pc.kappa, pc.mc_samples};
                std::vector<double>& out = per[r];
                out.reserve(width);
                for (Scheme s : schemes)
                    for (bool corr : corrs) {
                        const auto bds = realization_sinr(real, setup, s, !corr);
                        for (int k = 0; k < pc.K; ++k)
                            out.push_back(std::log2(1.0 + bds[k].sinr));
                    }
            });
            const PointStats st = reduce_mean(per, width);
            int idx = 0;
            for (Scheme s : schemes)
                for (bool corr : corrs)
                    for (int k = 0; k < pc.K; ++k, ++idx)
                        table.add_row({v, double(hardware_case_code(hc)),
                                       double(scheme_code(s)), corr ? 1.0 : 0.0,
                                       double(k), st.mean(idx), st.stderr_(idx)});
        }
    }
}

}  // namespace

ResultTable run_scenario(const ScenarioConfig& cfg, int workers) {
    cfg.validate();
    if (workers < 1) throw ConfigError("config field 'workers': must be >= 1");
    ResultTable table;
    const nlohmann::json cj = cfg.to_json();
    table.metadata["config"] = cj;
    table.metadata["config-hash"] = fnv1a_hex(cj.dump());
    table.metadata["seed"] = cfg.seed;
    table.metadata["version"] = version_string();
    table.metadata["scheme-codes"] = {{"mr", 0}, {"da-mr", 1}, {"da-zf", 2},
                                      {"da-mmse", 3}};
    if (cfg.mode == "se")
        run_se(cfg, workers, table);
    else if (cfg.mode == "averaged-sinr")
        run_averaged_sinr(cfg, workers, table);
    else if (cfg.mode == "distortion-terms")
        run_distortion_terms(cfg, table);
    else if (cfg.mode == "signal-distortion-vs-m")
        run_signal_distortion_vs_m(cfg, workers, table);
    else if (cfg.mode == "eigenvalues")
        run_eigenvalues(cfg, workers, table);
    else if (cfg.mode == "se-cdf") {
        table.metadata["model-codes"] = cfg.channel_kinds;
        run_se_cdf(cfg, workers, table);
    } else if (cfg.mode == "asymptotic-se") {
        table.metadata["case-codes"] = {{"ideal", 0}, {"ue-only", 1}, {"bs-only", 2},
                                        {"ue-bs", 3}};
        run_asymptotic_se(cfg, workers, table);
    }
    return table;
}

}  // namespace distmimo
