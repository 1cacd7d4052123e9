#include "qpr/imaging.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "qpr/parallel.hpp"

namespace qpr {

namespace {

double clamp_unit(double v) {
  if (!(v > 0.0)) return 0.0;  // also maps NaN to 0
  return v > 1.0 ? 1.0 : v;
}

/// Component of a quaternion by channel (0 = i, 1 = j, 2 = k).
double channel(const Quaternion& q, int h) { return h == 0 ? q.b : (h == 1 ? q.c : q.d); }
double& channel(Quaternion& q, int h) { return h == 0 ? q.b : (h == 1 ? q.c : q.d); }

QVector real_plane(const QVector& p, int h) {
  QVector x(p.size());
  for (std::size_t l = 0; l < p.size(); ++l) x[l] = Quaternion{channel(p[l], h)};
  return x;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

/// +1 or -1 applied to a channel (h >= 0) or to all channels (h < 0).
double choose_sign(const QVector& z, const QVector& truth, SignResolution mode, int h) {
  double s = 0.0;
  for (std::size_t l = 0; l < z.size(); ++l) {
    for (int c = 0; c < 3; ++c) {
      if (h >= 0 && c != h) continue;
      s += mode == SignResolution::truth ? channel(z[l], c) * channel(truth[l], c) : channel(z[l], c);
    }
  }
  return s >= 0.0 ? 1.0 : -1.0;
}

template <class RecoverBlock>
ImageRecovery recover_blocks(const ImageJob& job, const ImageOptions& opts, RecoverBlock&& recover) {
  const std::size_t count = job.blocks.size();
  std::vector<QVector> estimates(count);
  std::vector<BlockStatus> status(count);
  parallel_for(count, opts.threads, [&](std::size_t b) {
    status[b].block = b;
    const QVector& x = job.blocks[b];
    if (norm2(x) == 0.0) {
      estimates[b] = QVector(x.size());
      status[b].converged = true;
      return;
    }
    RunRecord rec = recover(x, RngStream(opts.seed, b));
    status[b].converged = rec.converged;
    status[b].iters = rec.iters_used;
    status[b].final_error = rec.final_rel_error;
    estimates[b] = std::move(rec.estimate);
  });
  ImageRecovery out;
  out.image = reassemble(job, estimates);
  out.metrics.per_block = std::move(status);
  out.metrics.psnr = psnr(reassemble(job), out.image);
  out.metrics.ssim = ssim(reassemble(job), out.image);
  return out;
}

}  // namespace

ImageJob decompose(const RgbImage& image, std::size_t block_side) {
  if (block_side == 0) throw std::invalid_argument("decompose: block side must be >= 1");
  if (image.width == 0 || image.height == 0) throw std::invalid_argument("decompose: empty image");
  if (image.width % block_side != 0 || image.height % block_side != 0) {
    throw std::invalid_argument("decompose: " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                                " is not a multiple of the block side " + std::to_string(block_side));
  }
  ImageJob job;
  job.width = image.width;
  job.height = image.height;
  job.block_side = block_side;
  const std::size_t bx = image.width / block_side;
  const std::size_t by = image.height / block_side;
  job.blocks.reserve(bx * by);
  for (std::size_t r = 0; r < by; ++r) {
    for (std::size_t c = 0; c < bx; ++c) {
      QVector block(block_side * block_side);
      for (std::size_t y = 0; y < block_side; ++y) {
        for (std::size_t x = 0; x < block_side; ++x) {
          const std::size_t px = c * block_side + x;
          const std::size_t py = r * block_side + y;
          block[y * block_side + x] = Quaternion{0.0, image.at(px, py, 0) / 255.0, image.at(px, py, 1) / 255.0,
                                                 image.at(px, py, 2) / 255.0};
        }
      }
      job.blocks.push_back(std::move(block));
    }
  }
  return job;
}

RgbImage reassemble(const ImageJob& job, const std::vector<QVector>& blocks) {
  const std::size_t side = job.block_side;
  const std::size_t bx = job.blocks_across();
  if (side == 0 || blocks.size() != bx * (job.height / side)) {
    throw std::invalid_argument("reassemble: block count does not match the layout");
  }
  RgbImage img(job.width, job.height);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].size() != side * side) throw std::invalid_argument("reassemble: block has the wrong length");
    const std::size_t r = b / bx;
    const std::size_t c = b % bx;
    for (std::size_t y = 0; y < side; ++y) {
      for (std::size_t x = 0; x < side; ++x) {
        const Quaternion& q = blocks[b][y * side + x];
        for (int h = 0; h < 3; ++h) {
          img.at(c * side + x, r * side + y, h) = static_cast<std::uint8_t>(std::lround(255.0 * clamp_unit(channel(q, h))));
        }
      }
    }
  }
  return img;
}

ImageRecovery recover_image(const ImageJob& job, const SolverConfig& cfg, const PureConfig& pure,
                            const ImageOptions& opts) {
  return recover_blocks(job, opts, [&](const QVector& x, RngStream rng) {
    const auto ens = make_ensemble_for(x, measurement_count(x.size(), opts.ratio), rng,
                                       EntryLaw::quaternion_gaussian, SignalKind::pure);
    RunRecord rec = solve_pure(ens, cfg, pure, rng.derive(1));
    QVector omega = qpfe(rec.estimate);
    rec.estimate = omega * choose_sign(omega, x, opts.sign, -1);
    return rec;
  });
}

SolverConfig real_raf_defaults() {
  SolverConfig cfg = SolverConfig::defaults(Algorithm::qraf);
  cfg.eta = 2.0;
  cfg.beta = 10.0;
  return cfg;
}

RunRecord raf_mono_signal(const QVector& p, double ratio, const SolverConfig& cfg, RngStream rng) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t d = p.size();
  const std::size_t n = measurement_count(d, ratio);
  const double scale = norm(p);
  if (!(scale > 0.0)) throw std::invalid_argument("raf_mono_signal: zero signal");

  struct Channel {
    QVector x;
    MeasurementEnsemble ens;
    std::optional<SolverIteration> iter;
  };
  std::array<Channel, 3> ch;
  for (int h = 0; h < 3; ++h) {
    ch[h].x = real_plane(p, h);
    if (norm2(ch[h].x) == 0.0) continue;  // empty channel stays at zero
    RngStream crng = rng.derive(static_cast<std::uint64_t>(h));
    ch[h].ens = make_ensemble_for(ch[h].x, n, crng, EntryLaw::real_gaussian);
    ch[h].iter.emplace(ch[h].ens, initialize(ch[h].ens, default_init(cfg, n)), cfg, crng.derive(1));
  }

  auto current = [&](int h) { return ch[h].iter ? ch[h].iter->iterate() : QVector(d); };
  auto error = [&] {
    double s = 0.0;
    for (int h = 0; h < 3; ++h) {
      const double e = dist(current(h), ch[h].x);
      s += e * e;
    }
    return std::sqrt(s) / scale;
  };
  auto assemble_estimate = [&] {
    QVector z(d);
    for (int h = 0; h < 3; ++h) {
      const QVector zh = current(h);
      for (std::size_t l = 0; l < d; ++l) channel(z[l], h) = zh[l].a;
    }
    return z;
  };

  RunRecord rec;
  double err = error();
  if (cfg.trace) rec.trace.push_back({0, err});
  QVector last_finite = assemble_estimate();
  int iters = 0;
  while (!(err < cfg.tol) && iters < cfg.max_iters) {
    for (auto& c : ch) {
      if (c.iter) c.iter->step();
    }
    ++iters;
    QVector z = assemble_estimate();
    if (!all_finite(z)) {
      rec.diverged = true;
      err = std::numeric_limits<double>::infinity();
      if (cfg.trace) rec.trace.push_back({iters, err});
      break;
    }
    last_finite = std::move(z);
    err = error();
    if (cfg.trace) rec.trace.push_back({iters, err});
  }
  rec.iters_used = iters;
  rec.final_rel_error = err;
  rec.converged = !rec.diverged && err < cfg.tol;
  rec.estimate = std::move(last_finite);
  rec.wall_time_ms = elapsed_ms(start);
  return rec;
}

RunRecord raf_conc_signal(const QVector& p, double ratio, const SolverConfig& cfg, RngStream rng,
                          ConcMeasurements measurements) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t d = p.size();
  QVector stacked(3 * d);
  for (int h = 0; h < 3; ++h) {
    for (std::size_t l = 0; l < d; ++l) stacked[h * d + l] = Quaternion{channel(p[l], h)};
  }
  const std::size_t n = measurement_count(measurements == ConcMeasurements::stacked ? 3 * d : d, ratio);
  const auto ens = make_ensemble_for(stacked, n, rng, EntryLaw::real_gaussian);
  RunRecord rec = solve(ens, cfg, rng.derive(1));
  QVector z(d);
  for (int h = 0; h < 3; ++h) {
    for (std::size_t l = 0; l < d; ++l) channel(z[l], h) = rec.estimate[h * d + l].a;
  }
  rec.estimate = std::move(z);
  rec.wall_time_ms = elapsed_ms(start);
  return rec;
}

ImageRecovery raf_mono(const ImageJob& job, const SolverConfig& cfg, const ImageOptions& opts) {
  return recover_blocks(job, opts, [&](const QVector& x, RngStream rng) {
    RunRecord rec = raf_mono_signal(x, opts.ratio, cfg, std::move(rng));
    for (int h = 0; h < 3; ++h) {
      const double s = choose_sign(rec.estimate, x, opts.sign, h);
      for (auto& q : rec.estimate) channel(q, h) *= s;
    }
    return rec;
  });
}

ImageRecovery raf_conc(const ImageJob& job, const SolverConfig& cfg, const ImageOptions& opts) {
  return recover_blocks(job, opts, [&](const QVector& x, RngStream rng) {
    RunRecord rec = raf_conc_signal(x, opts.ratio, cfg, std::move(rng), opts.conc);
    rec.estimate = rec.estimate * choose_sign(rec.estimate, x, opts.sign, -1);
    return rec;
  });
}

}  // namespace qpr
