#include "scma/detect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "scma/errors.hpp"

namespace scma {
namespace {

constexpr std::uint64_t kMaxMarginalHypotheses = std::uint64_t{1} << 22;
// Below this the linear-domain factor-node sum is recomputed with log-sum-exp.
constexpr double kUnderflowGuard = 1e-250;

// Normalizes log-domain values in place so that sum(exp(v)) = 1.
void log_normalize(std::span<double> v) {
  const double hi = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  const double shift = hi + std::log(s);
  for (double& x : v) x -= shift;
}

int argmax_first(std::span<const double> v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

FactorGraph::FactorGraph(const SystemDims& dims)
    : function_users_(dims.resources()), variable_edges_(dims.users()) {
  for (int r = 0; r < dims.resources(); ++r) {
    function_users_[r] = dims.users_on(r + 1);
    for (int pos = 0; pos < static_cast<int>(function_users_[r].size()); ++pos) {
      variable_edges_[function_users_[r][pos].user - 1].emplace_back(r, pos);
    }
  }
}

double DetectionResult::posterior(int user, int symbol) const {
  if (posteriors.empty()) throw ParameterError("no posteriors stored for this decision");
  const auto M = posteriors.size() / symbols.size();
  if (user < 1 || user > static_cast<int>(symbols.size()) || symbol < 1 ||
      symbol > static_cast<int>(M)) {
    throw RangeError("posterior index out of range");
  }
  return posteriors[(user - 1) * M + (symbol - 1)];
}

Detector::Detector(const CodebookCollection& collection)
    : dims_(collection.dims()), graph_(collection.dims()) {
  const int K = dims_.resources();
  const int M = dims_.codebook_size();
  const int J = dims_.users();

  int offset = 0;
  for (int r = 0; r < K; ++r) {
    Resource res;
    std::vector<int> strides;
    int stride = 1;
    for (const auto& slot : graph_.function_users(r)) {
      res.users.push_back(slot.user - 1);
      res.rows.push_back(slot.row);
      strides.push_back(stride);
      stride *= M;
    }
    res.local_count = stride;
    for (std::size_t pos = 0; pos < res.users.size(); ++pos) {
      const CMatrix& C = collection.constellation(res.users[pos] + 1);
      auto& row = res.entries.emplace_back(M);
      for (int m = 0; m < M; ++m) row[m] = C(res.rows[pos], m);
    }
    res.superposition.assign(res.local_count, cplx(0.0, 0.0));
    for (int code = 0; code < res.local_count; ++code) {
      int rest = code;
      for (std::size_t pos = 0; pos < res.users.size(); ++pos) {
        const int m = rest % M;
        rest /= M;
        res.superposition[code] += collection.constellation(res.users[pos] + 1)(res.rows[pos], m);
      }
    }
    offsets_.push_back(offset);
    offset += res.local_count;
    edge_offset_.push_back(edge_count_);
    edge_count_ += static_cast<int>(res.users.size());
    local_stride_.push_back(std::move(strides));
    resources_.push_back(std::move(res));
  }
  offsets_.push_back(offset);

  std::uint64_t s = 1;
  for (int j = 0; j < J; ++j) {
    user_stride_.push_back(s);
    s *= static_cast<std::uint64_t>(M);
  }

  user_slots_.assign(J, {});
  for (int r = 0; r < K; ++r) {
    for (std::size_t pos = 0; pos < resources_[r].users.size(); ++pos) {
      user_slots_[resources_[r].users[pos]].emplace_back(r, static_cast<int>(pos));
    }
  }

  // Greedy order: next user is the one that completes the most resources.
  std::vector<bool> assigned(J, false);
  std::vector<bool> done(K, false);
  for (int level = 0; level < J; ++level) {
    int pick = -1;
    int pick_score = -1;
    for (int j = 0; j < J; ++j) {
      if (assigned[j]) continue;
      int score = 0;
      for (int r = 0; r < K; ++r) {
        if (done[r]) continue;
        const auto& us = resources_[r].users;
        const bool touches = std::find(us.begin(), us.end(), j) != us.end();
        const bool rest_assigned = std::all_of(us.begin(), us.end(), [&](int u) {
          return u == j || assigned[u];
        });
        if (touches && rest_assigned) ++score;
      }
      if (score > pick_score) {
        pick = j;
        pick_score = score;
      }
    }
    assigned[pick] = true;
    search_order_.push_back(pick);
    for (int r = 0; r < K; ++r) {
      const auto& us = resources_[r].users;
      if (std::all_of(us.begin(), us.end(), [&](int u) { return assigned[u]; })) done[r] = true;
    }
  }

  // One bound table per distinct (resource, assigned positions) along the order.
  std::vector<unsigned> mask(K, 0u);
  auto table_for = [&](int r) {
    for (std::size_t t = 0; t < bound_tables_.size(); ++t) {
      if (bound_tables_[t].resource == r && bound_tables_[t].assigned == mask[r]) {
        return static_cast<int>(t);
      }
    }
    const auto& res = resources_[r];
    BoundTable t{r, mask[r], bound_size_, std::vector<int>(res.local_count)};
    for (int code = 0; code < res.local_count; ++code) {
      int key = 0;
      int rest = code;
      for (std::size_t pos = 0; pos < res.users.size(); ++pos) {
        if ((mask[r] >> pos) & 1u) key += (rest % M) * local_stride_[r][pos];
        rest /= M;
      }
      t.key_of_code[code] = key;
    }
    bound_size_ += res.local_count;
    bound_tables_.push_back(std::move(t));
    return static_cast<int>(bound_tables_.size() - 1);
  };
  for (int level = 0; level <= J; ++level) {
    if (level > 0) {
      for (const auto& [r, pos] : user_slots_[search_order_[level - 1]]) mask[r] |= 1u << pos;
    }
    std::vector<int> row(K);
    for (int r = 0; r < K; ++r) row[r] = table_for(r);
    level_table_.push_back(std::move(row));
  }
}

void Detector::check_inputs(std::span<const cplx> r, std::span<const cplx> gains,
                            double noise_var) const {
  const auto K = static_cast<std::size_t>(dims_.resources());
  if (r.size() != K) throw ParameterError("received vector must have K entries");
  if (gains.size() != K && gains.size() != K * static_cast<std::size_t>(dims_.users())) {
    throw ParameterError("channel gains must have K or J*K entries");
  }
  if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
    throw ParameterError("noise variance must be positive and finite");
  }
}

void Detector::local_metrics(std::span<const cplx> r, std::span<const cplx> gains,
                             std::vector<double>& out) const {
  out.resize(offsets_.back());
  const std::size_t K = resources_.size();
  const bool per_user = gains.size() != K;
  const int M = dims_.codebook_size();
  for (std::size_t k = 0; k < K; ++k) {
    const auto& res = resources_[k];
    double* dst = out.data() + offsets_[k];
    if (!per_user) {
      for (int code = 0; code < res.local_count; ++code) {
        dst[code] = std::norm(r[k] - gains[k] * res.superposition[code]);
      }
      continue;
    }
    for (int code = 0; code < res.local_count; ++code) {
      cplx s(0.0, 0.0);
      int rest = code;
      for (std::size_t pos = 0; pos < res.users.size(); ++pos) {
        s += gains[res.users[pos] * K + k] * res.entries[pos][rest % M];
        rest /= M;
      }
      dst[code] = std::norm(r[k] - s);
    }
  }
}

void Detector::joint_map(std::span<const cplx> r, std::span<const cplx> gains, double noise_var,
                         Workspace& ws, DetectionResult& out) const {
  check_inputs(r, gains, noise_var);
  local_metrics(r, gains, ws.loglik);
  const int J = dims_.users();
  const int M = dims_.codebook_size();
  const int K = dims_.resources();
  const double* local = ws.loglik.data();

  ws.bounds.assign(bound_size_, std::numeric_limits<double>::infinity());
  for (const auto& t : bound_tables_) {
    const double* src = local + offsets_[t.resource];
    double* dst = ws.bounds.data() + t.offset;
    for (std::size_t code = 0; code < t.key_of_code.size(); ++code) {
      double& slot = dst[t.key_of_code[code]];
      slot = std::min(slot, src[code]);
    }
  }
  const double* bounds = ws.bounds.data();
  auto table = [&](int level, int res) {
    return bounds + bound_tables_[level_table_[level][res]].offset;
  };

  // codes[r] holds the assigned digits of resource r's local code.
  std::vector<int>& codes = ws.codes;
  codes.assign(K, 0);
  std::vector<int>& sym = ws.path;
  sym.assign(J, 0);
  std::vector<int> best_sym(J, 0);
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_k = std::numeric_limits<std::uint64_t>::max();
  // Incremental bound updates round differently from the exact leaf sum.
  auto pruned = [&](double bound) { return bound > best + 1e-12 * (1.0 + best); };

  // Depth-first branch and bound over admissible per-resource lower bounds,
  // children in increasing bound.
  struct Child {
    double bound;
    int m;
  };
  std::vector<Child> children(static_cast<std::size_t>(J) * M);
  auto search = [&](auto&& self, int level, double bound, std::uint64_t k0) -> void {
    const int user = search_order_[level];
    const auto& slots = user_slots_[user];
    double base = bound;
    for (const auto& [res, pos] : slots) base -= table(level, res)[codes[res]];
    Child* child = children.data() + static_cast<std::size_t>(level) * M;
    for (int m = 0; m < M; ++m) {
      double b = base;
      for (const auto& [res, pos] : slots) {
        b += table(level + 1, res)[codes[res] + m * local_stride_[res][pos]];
      }
      child[m] = {b, m};
    }
    std::sort(child, child + M, [](const Child& a, const Child& b) {
      return a.bound < b.bound || (a.bound == b.bound && a.m < b.m);
    });
    for (int i = 0; i < M; ++i) {
      const auto [b, m] = child[i];
      if (pruned(b)) break;
      sym[user] = m;
      for (const auto& [res, pos] : slots) codes[res] += m * local_stride_[res][pos];
      const std::uint64_t k = k0 + static_cast<std::uint64_t>(m) * user_stride_[user];
      if (level + 1 == J) {
        double cost = 0.0;
        for (int res = 0; res < K; ++res) cost += local[offsets_[res] + codes[res]];
        if (cost < best || (cost == best && k < best_k)) {
          best = cost;
          best_k = k;
          best_sym = sym;
        }
      } else {
        self(self, level + 1, b, k);
      }
      for (const auto& [res, pos] : slots) codes[res] -= m * local_stride_[res][pos];
    }
    sym[user] = 0;
  };
  double root = 0.0;
  for (int res = 0; res < K; ++res) root += table(0, res)[0];
  search(search, 0, root, 0);

  out.symbols.resize(J);
  for (int j = 0; j < J; ++j) out.symbols[j] = best_sym[j] + 1;
  out.posteriors.clear();
  out.joint_index = best_k + 1;
}

void Detector::enumerate_metrics(const std::vector<double>& local,
                                 std::vector<double>& metrics) const {
  const std::uint64_t count = dims_.multiplexed_count();
  if (count == 0 || count > kMaxMarginalHypotheses) {
    throw CapacityError("marginal MAP enumeration is limited to " +
                        std::to_string(kMaxMarginalHypotheses) + " hypotheses");
  }
  const int J = dims_.users();
  const int M = dims_.codebook_size();
  metrics.assign(count, 0.0);
  std::vector<int> sym(J, 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    double total = 0.0;
    for (std::size_t res = 0; res < resources_.size(); ++res) {
      int code = 0;
      for (std::size_t pos = 0; pos < resources_[res].users.size(); ++pos) {
        code += sym[resources_[res].users[pos]] * local_stride_[res][pos];
      }
      total += local[offsets_[res] + code];
    }
    metrics[k] = total;
    for (int j = 0; j < J; ++j) {
      if (++sym[j] < M) break;
      sym[j] = 0;
    }
  }
}

void Detector::marginal_map(std::span<const cplx> r, std::span<const cplx> gains,
                            double noise_var, Workspace& ws, DetectionResult& out) const {
  check_inputs(r, gains, noise_var);
  local_metrics(r, gains, ws.loglik);
  enumerate_metrics(ws.loglik, ws.metrics);
  const int J = dims_.users();
  const int M = dims_.codebook_size();
  const double lo = *std::min_element(ws.metrics.begin(), ws.metrics.end());

  out.posteriors.assign(static_cast<std::size_t>(J) * M, 0.0);
  std::vector<int> sym(J, 0);
  for (double metric : ws.metrics) {
    const double w = std::exp(-(metric - lo) / noise_var);
    for (int j = 0; j < J; ++j) out.posteriors[j * M + sym[j]] += w;
    for (int j = 0; j < J; ++j) {
      if (++sym[j] < M) break;
      sym[j] = 0;
    }
  }
  out.symbols.resize(J);
  for (int j = 0; j < J; ++j) {
    std::span<double> p(out.posteriors.data() + j * M, M);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= total;
    out.symbols[j] = argmax_first(p) + 1;
  }
  out.joint_index.reset();
}

void Detector::mpa(std::span<const cplx> r, std::span<const cplx> gains, double noise_var,
                   const MpaOptions& options, Workspace& ws, DetectionResult& out) const {
  mpa_scaled(r, gains, noise_var, options, 1.0, ws, out);
}

void Detector::mpa_scaled(std::span<const cplx> r, std::span<const cplx> gains,
                          double noise_var, const MpaOptions& options, double message_scale,
                          Workspace& ws, DetectionResult& out) const {
  check_inputs(r, gains, noise_var);
  if (options.iterations < 1) throw ParameterError("MPA needs at least one iteration");
  if (!(message_scale > 0.0)) throw ParameterError("message scale must be positive");

  // Log-likelihoods per local code, then their max-shifted exponentials.
  local_metrics(r, gains, ws.loglik);
  ws.metrics.resize(ws.loglik.size());
  for (std::size_t k = 0; k < resources_.size(); ++k) {
    double* ll = ws.loglik.data() + offsets_[k];
    double* ex = ws.metrics.data() + offsets_[k];
    const int n = resources_[k].local_count;
    double hi = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < n; ++c) {
      ll[c] = -ll[c] / noise_var;
      hi = std::max(hi, ll[c]);
    }
    for (int c = 0; c < n; ++c) ex[c] = std::exp(ll[c] - hi);
  }

  const bool linear_ok = !options.log_domain_only &&
                         (dims_.codebook_size() == 4 ? mpa_linear<4>(options, message_scale, ws, out)
                                                     : mpa_linear<0>(options, message_scale, ws, out));
  if (!linear_ok) {
    mpa_log(options, message_scale, ws, out);
  }
}

// Sum-product with normalized linear-domain messages. Returns false as soon as a
// message entry drops below the underflow guard; the caller then recomputes the
// block in the log domain.
template <int kM>
bool Detector::mpa_linear(const MpaOptions& options, double message_scale, Workspace& ws,
                          DetectionResult& out) const {
  const int J = dims_.users();
  const int M = kM > 0 ? kM : dims_.codebook_size();
  const int bits = dims_.bits_per_symbol();
  const std::size_t msg = static_cast<std::size_t>(edge_count_) * M;
  ws.to_fn.assign(msg, message_scale / M);
  ws.to_vn.assign(msg, 1.0 / M);
  ws.scratch.resize(static_cast<std::size_t>(M) * M);
  double* acc = ws.scratch.data();

  auto normalize = [&](double* v, double* dst, double& moved) {
    double s = 0.0;
    for (int m = 0; m < M; ++m) s += v[m];
    if (!(s > 0.0) || !std::isfinite(s)) return false;
    const double inv = 1.0 / s;
    for (int m = 0; m < M; ++m) {
      const double x = v[m] * inv;
      if (x < kUnderflowGuard) return false;
      if (options.early_stop_tol > 0.0) moved = std::max(moved, std::abs(std::log(x / dst[m])));
      dst[m] = x;
    }
    return true;
  };

  std::array<double, 64> out0{};
  std::array<double, 64> out1{};
  std::array<double, 64> out2{};
  if (M > 64) return false;
  for (int it = 0; it < options.iterations; ++it) {
    double moved = 0.0;
    for (std::size_t k = 0; k < resources_.size(); ++k) {
      const auto& res = resources_[k];
      const int d = static_cast<int>(res.users.size());
      const int e0 = edge_offset_[k];
      const double* ex = ws.metrics.data() + offsets_[k];
      if (d == 3) {
        // code = a + M b + M^2 c; T[a][b] = sum_c E p2[c]
        const double* p0 = &ws.to_fn[e0 * M];
        const double* p1 = &ws.to_fn[(e0 + 1) * M];
        const double* p2 = &ws.to_fn[(e0 + 2) * M];
        std::fill(out0.begin(), out0.begin() + M, 0.0);
        std::fill(out1.begin(), out1.begin() + M, 0.0);
        std::fill(out2.begin(), out2.begin() + M, 0.0);
        std::fill(acc, acc + M * M, 0.0);
        for (int c = 0; c < M; ++c) {
          for (int b = 0; b < M; ++b) {
            const double* e = ex + (c * M + b) * M;
            double wc = 0.0;
            for (int a = 0; a < M; ++a) {
              acc[b * M + a] += e[a] * p2[c];
              wc += e[a] * p0[a];
            }
            out2[c] += wc * p1[b];
          }
        }
        for (int b = 0; b < M; ++b) {
          for (int a = 0; a < M; ++a) {
            out0[a] += acc[b * M + a] * p1[b];
            out1[b] += acc[b * M + a] * p0[a];
          }
        }
        if (!normalize(out0.data(), &ws.to_vn[e0 * M], moved) ||
            !normalize(out1.data(), &ws.to_vn[(e0 + 1) * M], moved) ||
            !normalize(out2.data(), &ws.to_vn[(e0 + 2) * M], moved)) {
          return false;
        }
        continue;
      }
      for (int pos = 0; pos < d; ++pos) {
        std::fill(out0.begin(), out0.begin() + M, 0.0);
        for (int code = 0; code < res.local_count; ++code) {
          double prod = ex[code];
          for (int other = 0; other < d; ++other) {
            if (other != pos) prod *= ws.to_fn[(e0 + other) * M + ((code >> (other * bits)) & (M - 1))];
          }
          out0[(code >> (pos * bits)) & (M - 1)] += prod;
        }
        if (!normalize(out0.data(), &ws.to_vn[(e0 + pos) * M], moved)) return false;
      }
    }
    for (int j = 0; j < J; ++j) {
      const auto& edges = graph_.variable_edges(j);
      for (const auto& [k, pos] : edges) {
        std::fill(out0.begin(), out0.begin() + M, 1.0);
        for (const auto& [k2, pos2] : edges) {
          if (k2 == k && pos2 == pos) continue;
          const double* src = &ws.to_vn[(edge_offset_[k2] + pos2) * M];
          for (int m = 0; m < M; ++m) out0[m] *= src[m];
        }
        double unused = 0.0;
        if (!normalize(out0.data(), &ws.to_fn[(edge_offset_[k] + pos) * M], unused)) return false;
      }
    }
    if (options.early_stop_tol > 0.0 && it > 0 && moved < options.early_stop_tol) break;
  }

  out.symbols.resize(J);
  out.posteriors.assign(static_cast<std::size_t>(J) * M, 1.0);
  for (int j = 0; j < J; ++j) {
    std::span<double> p(out.posteriors.data() + j * M, M);
    for (const auto& [k, pos] : graph_.variable_edges(j)) {
      const double* src = &ws.to_vn[(edge_offset_[k] + pos) * M];
      for (int m = 0; m < M; ++m) p[m] *= src[m];
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (!(total > 0.0)) return false;
    for (double& x : p) x /= total;
    out.symbols[j] = argmax_first(p) + 1;
  }
  out.joint_index.reset();
  return true;
}

void Detector::mpa_log(const MpaOptions& options, double message_scale, Workspace& ws,
                       DetectionResult& out) const {
  const int J = dims_.users();
  const int M = dims_.codebook_size();
  const int bits = dims_.bits_per_symbol();
  const std::size_t msg = static_cast<std::size_t>(edge_count_) * M;
  ws.to_fn.assign(msg, std::log(message_scale) - std::log(static_cast<double>(M)));
  ws.to_vn.assign(msg, 0.0);
  ws.scratch.resize(2 * msg);
  double* lin = ws.scratch.data();        // linear incoming messages per edge
  double* acc = ws.scratch.data() + msg;  // outgoing sums per edge

  for (int it = 0; it < options.iterations; ++it) {
    double moved = 0.0;
    // Function-node update.
    for (std::size_t k = 0; k < resources_.size(); ++k) {
      const auto& res = resources_[k];
      const int d = static_cast<int>(res.users.size());
      const int e0 = edge_offset_[k];
      for (int pos = 0; pos < d; ++pos) {
        const double* in = &ws.to_fn[(e0 + pos) * M];
        const double hi = *std::max_element(in, in + M);
        for (int m = 0; m < M; ++m) lin[(e0 + pos) * M + m] = std::exp(in[m] - hi);
        std::fill(acc + (e0 + pos) * M, acc + (e0 + pos + 1) * M, 0.0);
      }
      const double* ex = ws.metrics.data() + offsets_[k];
      for (int code = 0; code < res.local_count; ++code) {
        for (int pos = 0; pos < d; ++pos) {
          double prod = ex[code];
          for (int other = 0; other < d; ++other) {
            if (other == pos) continue;
            prod *= lin[(e0 + other) * M + ((code >> (other * bits)) & (M - 1))];
          }
          acc[(e0 + pos) * M + ((code >> (pos * bits)) & (M - 1))] += prod;
        }
      }
      for (int pos = 0; pos < d; ++pos) {
        const int e = e0 + pos;
        double* dst = &ws.to_vn[e * M];
        const double* a = acc + e * M;
        const bool underflow = *std::min_element(a, a + M) < kUnderflowGuard;
        std::array<double, 64> fresh{};
        std::vector<double> fresh_big;
        double* f = M <= 64 ? fresh.data() : (fresh_big.resize(M), fresh_big.data());
        if (!underflow) {
          for (int m = 0; m < M; ++m) f[m] = std::log(a[m]);
        } else {
          // Exact log-sum-exp over the codes with user `pos` at symbol m.
          const double* ll = ws.loglik.data() + offsets_[k];
          for (int m = 0; m < M; ++m) f[m] = -std::numeric_limits<double>::infinity();
          for (int code = 0; code < res.local_count; ++code) {
            double v = ll[code];
            for (int other = 0; other < d; ++other) {
              if (other == pos) continue;
              v += ws.to_fn[(e0 + other) * M + ((code >> (other * bits)) & (M - 1))];
            }
            const int m = (code >> (pos * bits)) & (M - 1);
            const double hi = std::max(f[m], v);
            if (hi > -std::numeric_limits<double>::infinity()) {
              f[m] = hi + std::log(std::exp(f[m] - hi) + std::exp(v - hi));
            }
          }
        }
        log_normalize({f, static_cast<std::size_t>(M)});
        for (int m = 0; m < M; ++m) {
          moved = std::max(moved, std::abs(f[m] - dst[m]));
          dst[m] = f[m];
        }
      }
    }
    // Variable-node update: product of the other incoming extrinsics.
    for (int j = 0; j < J; ++j) {
      const auto& edges = graph_.variable_edges(j);
      for (const auto& [k, pos] : edges) {
        double* dst = &ws.to_fn[(edge_offset_[k] + pos) * M];
        std::fill(dst, dst + M, 0.0);
        for (const auto& [k2, pos2] : edges) {
          if (k2 == k && pos2 == pos) continue;
          const double* src = &ws.to_vn[(edge_offset_[k2] + pos2) * M];
          for (int m = 0; m < M; ++m) dst[m] += src[m];
        }
        log_normalize({dst, static_cast<std::size_t>(M)});
      }
    }
    if (options.early_stop_tol > 0.0 && it > 0 && moved < options.early_stop_tol) break;
  }

  out.symbols.resize(J);
  out.posteriors.assign(static_cast<std::size_t>(J) * M, 0.0);
  for (int j = 0; j < J; ++j) {
    std::span<double> p(out.posteriors.data() + j * M, M);
    for (const auto& [k, pos] : graph_.variable_edges(j)) {
      const double* src = &ws.to_vn[(edge_offset_[k] + pos) * M];
      for (int m = 0; m < M; ++m) p[m] += src[m];
    }
    log_normalize(p);
    for (double& x : p) x = std::exp(x);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= total;
    out.symbols[j] = argmax_first(p) + 1;
  }
  out.joint_index.reset();
}

DetectionResult joint_map(std::span<const cplx> r, const CodebookCollection& collection,
                          std::span<const cplx> gains, double noise_var) {
  const Detector det(collection);
  Detector::Workspace ws;
  DetectionResult out;
  det.joint_map(r, gains, noise_var, ws, out);
  return out;
}

DetectionResult marginal_map(std::span<const cplx> r, const CodebookCollection& collection,
                             std::span<const cplx> gains, double noise_var) {
  const Detector det(collection);
  Detector::Workspace ws;
  DetectionResult out;
  det.marginal_map(r, gains, noise_var, ws, out);
  return out;
}

DetectionResult mpa_decode(std::span<const cplx> r, const CodebookCollection& collection,
                           std::span<const cplx> gains, double noise_var, int iterations) {
  const Detector det(collection);
  Detector::Workspace ws;
  DetectionResult out;
  MpaOptions options;
  options.iterations = iterations;
  det.mpa(r, gains, noise_var, options, ws, out);
  return out;
}

}  // namespace scma
