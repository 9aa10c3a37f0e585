#include "disorder.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "bloch.hpp"
#include "rng.hpp"

namespace essh {

ModelParams staggered_counterpart(const ModelParams& reference) {
  const double gap = band_scan(reference).gap_width;
  ModelParams p;
  p.j1 = p.j1p = 1.0;
  p.j3 = p.j3p = 0.0;
  p.omega_delta = gap / 2.0;  // staggered gap is exactly 2*omega_delta
  return p;
}

namespace {
SampleRecord run_sample(const EnsembleSpec& spec, int si, int sample) {
  SampleRecord rec;
  rec.sigma_index = si;
  rec.sample = sample;
  rec.sigma = spec.sigmas[si];
  rec.seed = derive_seed(spec.master_seed, static_cast<uint64_t>(si),
                         static_cast<uint64_t>(sample));
  LatticeSpec ls;
  ls.n_cells = spec.n_cells;
  ls.params = spec.params;
  DisorderSpec d{spec.kind, rec.sigma, rec.seed};
  try {
    auto bath = build_hamiltonian(ls, rec.sigma > 0.0 ? std::optional(d)
                                                      : std::nullopt);
    auto h = compose(bath, {spec.emitter});
    auto bs = bound_state_numeric(h, spec.gap_lo, spec.gap_hi);
    rec.e_bs = bs.energy;
    rec.ipr = ipr(bs.state);
    rec.n_ingap = bs.n_ingap;
    double wa = 0.0, wb = 0.0;
    for (int r = 0; r < h.dim(); ++r) {
      if (h.site_of_row[r] < 0) continue;
      const double w = bs.state(r) * bs.state(r);
      (sublattice_of(h.site_of_row[r]) == 0 ? wa : wb) += w;
    }
    rec.photon_b_fraction = (wa + wb > 0.0) ? wb / (wa + wb) : 0.0;
  } catch (const Error&) {
    rec.failed = true;
  }
  return rec;
}
}  // namespace

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
  if (spec.n_cells < 100) {
    throw Error(ErrorCode::size_too_small, "ensembles need n_cells >= 100");
  }
  if (spec.samples < 10) {
    throw Error(ErrorCode::invalid_argument, "ensembles need >= 10 samples");
  }
  const int ns = static_cast<int>(spec.sigmas.size());
  EnsembleResult out;
  out.samples.resize(static_cast<size_t>(ns) * spec.samples);

  std::atomic<int> next{0};
  const int total = ns * spec.samples;
  auto worker = [&] {
    for (int t = next.fetch_add(1); t < total; t = next.fetch_add(1)) {
      // slot index == task index keeps output order canonical
      out.samples[t] = run_sample(spec, t / spec.samples, t % spec.samples);
    }
  };
  const int nw = std::max(1, spec.n_threads);
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (int si = 0; si < ns; ++si) {
    SigmaStats st;
    st.sigma = spec.sigmas[si];
    double se = 0.0, sipr = 0.0;
    for (int s = 0; s < spec.samples; ++s) {
      const auto& r = out.samples[static_cast<size_t>(si) * spec.samples + s];
      if (r.failed) {
        ++st.failures;
        continue;
      }
      ++st.count;
      se += r.e_bs;
      sipr += r.ipr;
    }
    if (st.count > 0) {
      st.mean_e = se / st.count;
      st.mean_ipr = sipr / st.count;
      double acc = 0.0;
      for (int s = 0; s < spec.samples; ++s) {
        const auto& r = out.samples[static_cast<size_t>(si) * spec.samples + s];
        if (!r.failed) acc += (r.e_bs - st.mean_e) * (r.e_bs - st.mean_e);
      }
      st.std_e = (st.count > 1) ? std::sqrt(acc / (st.count - 1)) : 0.0;
    }
    out.stats.push_back(st);
  }
  return out;
}

std::vector<EnsembleResult> size_scaling_study(EnsembleSpec spec,
                                               const std::vector<int>& sizes) {
  std::vector<EnsembleResult> out;
  const int ref_cells = spec.n_cells;
  for (int n : sizes) {
    EnsembleSpec s = spec;
    s.n_cells = n;
    // keep the emitter centred when the lattice is resized
    s.emitter.contacts.clear();
    for (const auto& [site, w] : spec.emitter.contacts) {
      const int offset = site - 2 * (ref_cells / 2);
      s.emitter.contacts.emplace_back(2 * (n / 2) + offset, w);
    }
    out.push_back(run_ensemble(s));
  }
  return out;
}

std::vector<std::vector<double>> ipr_map(EnsembleSpec spec,
                                         const std::vector<double>& g_grid,
                                         const std::vector<double>& sigma_grid) {
  spec.sigmas = sigma_grid;
  std::vector<std::vector<double>> map;
  for (double g : g_grid) {
    for (auto& [site, w] : spec.emitter.contacts) w = g;
    auto res = run_ensemble(spec);
    std::vector<double> row;
    for (const auto& st : res.stats) row.push_back(st.mean_ipr);
    map.push_back(std::move(row));
  }
  return map;
}

}  // namespace essh
