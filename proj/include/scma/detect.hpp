#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scma/core.hpp"

namespace scma {

// Resources are function nodes, users are variable nodes.
class FactorGraph {
 public:
  explicit FactorGraph(const SystemDims& dims);

  int function_nodes() const noexcept { return static_cast<int>(function_users_.size()); }
  int variable_nodes() const noexcept { return static_cast<int>(variable_edges_.size()); }
  // Users on resource r (zero-based r), each with its row in C_j.
  const std::vector<UserSlot>& function_users(int r) const { return function_users_.at(r); }
  // Edges of user j (zero-based j) as (resource, position of j in that resource's user list).
  const std::vector<std::pair<int, int>>& variable_edges(int j) const { return variable_edges_.at(j); }
  int function_degree(int r) const { return static_cast<int>(function_users_.at(r).size()); }
  int variable_degree(int j) const { return static_cast<int>(variable_edges_.at(j).size()); }

 private:
  std::vector<std::vector<UserSlot>> function_users_;
  std::vector<std::vector<std::pair<int, int>>> variable_edges_;
};

struct DetectionResult {
  std::vector<int> symbols;              // one-based, per user
  std::vector<double> posteriors;        // J x M row-major; empty for joint MAP
  std::optional<std::uint64_t> joint_index;  // one-based k for joint MAP

  double posterior(int user, int symbol) const;  // one-based
};

struct MpaOptions {
  int iterations = 15;
  // Stop once no message moves by more than this (log domain); 0 keeps the fixed count.
  double early_stop_tol = 0.0;
  // Skip the linear-domain fast path (reference computation for tests).
  bool log_domain_only = false;
};

// Precomputed per-resource superpositions for one collection. All methods are
// const; scratch lives in a caller-owned Workspace so one Detector can serve
// many threads.
//
// `gains` holds either K entries (one channel shared by all users) or J*K
// entries, user-major (gains[j*K + k]), for per-user channels.
class Detector {
 public:
  explicit Detector(const CodebookCollection& collection);

  struct Workspace {
    std::vector<double> loglik;    // per resource, per local code
    std::vector<double> metrics;   // joint metrics for marginal MAP
    std::vector<double> to_fn;     // variable -> function messages
    std::vector<double> to_vn;     // function -> variable messages
    std::vector<double> scratch;
    std::vector<double> bounds;    // branch-and-bound lower-bound tables
    std::vector<int> path;
    std::vector<int> codes;
  };

  const SystemDims& dims() const noexcept { return dims_; }
  const FactorGraph& graph() const noexcept { return graph_; }

  // argmin_k ||r - diag(gains) s_k||^2, ties to the smallest k.
  void joint_map(std::span<const cplx> r, std::span<const cplx> gains, double noise_var,
                 Workspace& ws, DetectionResult& out) const;
  void marginal_map(std::span<const cplx> r, std::span<const cplx> gains, double noise_var,
                    Workspace& ws, DetectionResult& out) const;
  void mpa(std::span<const cplx> r, std::span<const cplx> gains, double noise_var,
           const MpaOptions& options, Workspace& ws, DetectionResult& out) const;

  // Applies a positive factor to every initial message (log shift); decisions
  // must not change. Used by property tests.
  void mpa_scaled(std::span<const cplx> r, std::span<const cplx> gains, double noise_var,
                  const MpaOptions& options, double message_scale, Workspace& ws,
                  DetectionResult& out) const;

 private:
  struct Resource {
    std::vector<int> users;           // zero-based, ascending
    std::vector<int> rows;            // row of C_j for each user
    int local_count = 1;              // M^degree
    std::vector<cplx> superposition;  // per local code
    std::vector<std::vector<cplx>> entries;  // [pos][m] = C_j(row, m)
  };

  void check_inputs(std::span<const cplx> r, std::span<const cplx> gains, double noise_var) const;
  // Per-resource squared distances |r - g s|^2 for every local code.
  void local_metrics(std::span<const cplx> r, std::span<const cplx> gains,
                     std::vector<double>& out) const;
  // kM > 0 fixes the codebook size at compile time; 0 reads it from dims_.
  template <int kM>
  bool mpa_linear(const MpaOptions& options, double message_scale, Workspace& ws,
                  DetectionResult& out) const;
  void mpa_log(const MpaOptions& options, double message_scale, Workspace& ws,
               DetectionResult& out) const;
  void enumerate_metrics(const std::vector<double>& local, std::vector<double>& metrics) const;

  SystemDims dims_;
  FactorGraph graph_;
  std::vector<Resource> resources_;
  std::vector<int> offsets_;      // start of each resource in the local tables
  std::vector<int> search_order_;  // users in branch-and-bound order
  // min of a resource metric over the users not yet assigned; key_of_code maps a
  // local code to the entry holding the minimum for its assigned digits.
  struct BoundTable {
    int resource = 0;
    unsigned assigned = 0;  // bitmask over positions
    int offset = 0;
    std::vector<int> key_of_code;
  };
  std::vector<BoundTable> bound_tables_;
  int bound_size_ = 0;
  // level_table_[l][r]: table for resource r once the first l users of the order are fixed.
  std::vector<std::vector<int>> level_table_;
  // (resource, position) slots of each user.
  std::vector<std::vector<std::pair<int, int>>> user_slots_;
  std::vector<std::uint64_t> user_stride_;    // M^j
  // For each resource and user slot, M^position inside the local code.
  std::vector<std::vector<int>> local_stride_;
  int edge_count_ = 0;
  std::vector<int> edge_offset_;  // first edge of each resource
};

DetectionResult joint_map(std::span<const cplx> r, const CodebookCollection& collection,
                          std::span<const cplx> gains, double noise_var);
DetectionResult marginal_map(std::span<const cplx> r, const CodebookCollection& collection,
                             std::span<const cplx> gains, double noise_var);
DetectionResult mpa_decode(std::span<const cplx> r, const CodebookCollection& collection,
                           std::span<const cplx> gains, double noise_var, int iterations = 15);

}  // namespace scma
