#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <future>
#include <mutex>
#include <random>
#include <thread>

#include "emi/error.hpp"
#include "emi/inverse.hpp"
#include "emi/petro.hpp"

namespace emi {

void StudyConfig::validate() const {
    if (models.empty()) throw ValidationError("error study needs at least one model");
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (methods.empty()) throw ValidationError("error study needs at least one method");
    for (double e : nsr) {
        if (!(e >= 0.0 && e <= 0.05)) throw ValidationError("nsr levels must be in [0, 0.05]");
    }
    if (truths.empty()) {
        for (const auto& m : models) preset(m);
    } else if (truths.size() != models.size()) {
        throw ValidationError("error study truths must match the model names");
    } else {
        for (const auto& p : truths) unpack_parameters(p);
    }
    settings.validate();
    bounds.validate();
    instrument.validate();
}

namespace {

std::vector<double> random_start(const Bounds& bounds, std::size_t layers, std::uint64_t seed) {
    const opt::Box box = bounds.box(layers);
    std::mt19937_64 rng(seed);
    std::vector<double> p(box.lo.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        // keep clear of the faces, where the bounded transform flattens the objective
        const double u = 0.05 + 0.9 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        p[i] = std::exp(std::log(box.lo[i]) + u * std::log(box.hi[i] / box.lo[i]));
    }
    return p;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

StudyResult error_study(const StudyConfig& config) {
    config.validate();
    const std::size_t nm = config.models.size();
    const std::size_t ne = config.nsr.size();
    const std::size_t nt = static_cast<std::size_t>(config.trials);
    const std::size_t nk = config.methods.size();

    std::vector<std::vector<double>> truth(nm);
    for (std::size_t i = 0; i < nm; ++i) {
        truth[i] = config.truths.empty() ? pack_parameters(preset_model(config.models[i])) : config.truths[i];
    }

    StudyResult out;
    out.trials.resize(nm * ne * nt * nk);
    const std::size_t jobs = nm * ne * nt;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;

    auto work = [&] {
        for (;;) {
            const std::size_t job = next.fetch_add(1);
            if (job >= jobs) return;
            const std::size_t mi = job / (ne * nt);
            const std::size_t ei = (job / nt) % ne;
            const std::size_t ti = job % nt;
            try {
                const std::uint64_t seed = derive_seed(config.seed, mi, ei, ti);
                const std::vector<double>& p_star = truth[mi];
                const std::size_t layers = (p_star.size() + 1) / 2;
                const double eps = config.nsr[ei];
                const ObservationVector d =
                    synth_observations(p_star, config.instrument, eps, seed, config.settings.quad);
                for (std::size_t ki = 0; ki < nk; ++ki) {
                    SolverSettings s = config.settings;
                    s.method = config.methods[ki];
                    s.seed = derive_seed(seed, 1, ki);
                    s.sa.tol = eps > 0.0 ? 1e-6 : 1e-9;
                    std::vector<double> p0 = config.random_start ? random_start(config.bounds, layers, derive_seed(seed, 2))
                                                                 : config.bounds.midpoint(layers);
                    TrialRecord& rec = out.trials[job * nk + ki];
                    rec.model = config.models[mi];
                    rec.nsr = eps;
                    rec.method = s.method;
                    rec.trial = static_cast<int>(ti);
                    rec.seed = seed;
                    rec.p_star = p_star;
                    rec.result = invert(d, config.instrument, config.bounds, s, layers, p0);
                    rec.result.relative_error_pct = relative_errors_pct(rec.result.p_hat, p_star);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_lock);
                if (!failure) failure = std::current_exception();
                next = jobs;
                return;
            }
        }
    };

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
    std::vector<std::future<void>> pool;
    for (unsigned w = 1; w < threads; ++w) pool.push_back(std::async(std::launch::async, work));
    work();
    for (auto& f : pool) f.get();
    if (failure) std::rethrow_exception(failure);

    for (std::size_t ei = 0; ei < ne; ++ei) {
        for (std::size_t mi = 0; mi < nm; ++mi) {
            for (std::size_t ki = 0; ki < nk; ++ki) {
                StudyCell cell;
                cell.model = config.models[mi];
                cell.nsr = config.nsr[ei];
                cell.method = config.methods[ki];
                cell.trials = config.trials;
                const std::size_t np = truth[mi].size();
                std::vector<std::vector<double>> errs(np);
                for (std::size_t ti = 0; ti < nt; ++ti) {
                    const TrialRecord& rec = out.trials[((mi * ne + ei) * nt + ti) * nk + ki];
                    for (std::size_t j = 0; j < np; ++j) errs[j].push_back(rec.result.relative_error_pct[j]);
                    cell.mean_wall_seconds += rec.result.wall_seconds / static_cast<double>(nt);
                }
                for (std::size_t j = 0; j < np; ++j) {
                    double sum = 0.0;
                    for (double e : errs[j]) sum += e;
                    cell.mean_error_pct.push_back(sum / static_cast<double>(nt));
                    cell.median_error_pct.push_back(median(errs[j]));
                }
                out.cells.push_back(std::move(cell));
            }
        }
    }
    return out;
}

GrandAverage grand_average(const StudyResult& study, double nsr, SolverMethod method) {
    double ss = 0.0, sh = 0.0;
    int ns = 0, nh = 0;
    for (const auto& c : study.cells) {
        if (c.nsr != nsr || c.method != method) continue;
        const std::size_t layers = (c.mean_error_pct.size() + 1) / 2;
        for (std::size_t j = 0; j < c.mean_error_pct.size(); ++j) {
            if (j < layers) {
                ss += c.mean_error_pct[j];
                ++ns;
            } else {
                sh += c.mean_error_pct[j];
                ++nh;
            }
        }
    }
    if (ns == 0) throw ValidationError("no study cells for the requested noise level and method");
    return {ss / ns, nh ? sh / nh : 0.0};
}

}  // namespace emi
