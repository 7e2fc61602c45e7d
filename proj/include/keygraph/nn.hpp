#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "keygraph/tensor.hpp"

namespace keygraph {

// Trainable tensor with gradient and AdamW moment slots.
struct Parameter {
  Tensor value;
  Tensor grad;
  Tensor m;  // first moment
  Tensor v;  // second moment
  long long step = 0;

  Parameter() = default;
  explicit Parameter(Tensor init)
      : value(std::move(init)),
        grad(value.rows, value.cols),
        m(value.rows, value.cols),
        v(value.rows, value.cols) {}

  void zero_grad() { grad.fill(0.0); }
  void reset_optimizer_state() {
    m.fill(0.0);
    v.fill(0.0);
    step = 0;
  }
};

struct OptimizerConfig {
  double learning_rate = 1e-4;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_num = 1e-8;
};

// Decoupled weight decay: value -= lr * (m_hat / (sqrt(v_hat) + eps) + wd * value)
void adamw_step(const std::vector<Parameter*>& params, const OptimizerConfig& cfg);
void zero_grads(const std::vector<Parameter*>& params);

// softmax over a row of logits; outputs are positive and sum to 1
std::vector<double> softmax(const std::vector<double>& logits);

// loss = -log softmax(logits)[target]; grad = softmax - one_hot(target).
// Computed via log1p around the max so near-certain targets keep full precision.
std::pair<double, std::vector<double>> softmax_cross_entropy(
    const std::vector<double>& logits, int target);

// Reverse-mode tape over Tensors. Ops append nodes; creation order is the
// topological order, so backward() is a reverse sweep. A node created from a
// Parameter routes its gradient into Parameter::grad (scaled by the backward
// seed, which callers use for minibatch averaging).
class Tape {
 public:
  using Var = int;

  Var input(Tensor x);
  Var param(Parameter& p);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);                    // same shape
  Var add_row(Var a, Var bias);             // bias is 1 x cols, broadcast over rows
  Var relu(Var a);
  Var scale_shift(Var a, Var s, double c);  // (c + s) * a, s is a 1x1 var
  Var sum_rows(Var a);                      // column sums -> 1 x cols
  Var concat_cols(const std::vector<Var>& parts);
  Var softmax_cross_entropy_loss(Var logits, int target);  // logits 1 x C -> 1 x 1

  const Tensor& value(Var id) const { return nodes_[id].value; }
  const Tensor& grad(Var id) const { return nodes_[id].grad; }

  void backward(Var loss, double seed = 1.0);

  // Drop all nodes but keep allocated capacity; tapes are reused per sample.
  void clear() { nodes_.clear(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    Parameter* source = nullptr;
    std::function<void(Tape&, Node&)> back;  // pulls grad into input nodes
  };

  Var push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<Var>(nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
};

// Fully-connected stack: affine layers with ReLU between them and no
// activation after the last.
struct DenseLayer {
  Parameter weight;  // in x out
  Parameter bias;    // 1 x out
};

struct MLPBlock {
  std::vector<DenseLayer> layers;

  // He-initialized weights, zero biases. dims = {in, hidden..., out}.
  static MLPBlock make(const std::vector<int>& dims, Rng& rng);

  int input_dim() const { return layers.front().weight.value.rows; }
  int output_dim() const { return layers.back().weight.value.cols; }

  Tape::Var forward(Tape& tape, Tape::Var x);
  std::vector<Parameter*> parameters();
};

// Central-difference check of the analytic gradients currently stored in the
// parameters. loss_fn must be deterministic and must not touch grads.
// Elementwise error is |fd - g| / max(|fd|, |g|) when either magnitude
// exceeds atol, otherwise the absolute difference; returns the maximum.
double finite_difference_check(const std::function<double()>& loss_fn,
                               const std::vector<Parameter*>& params,
                               double h, double atol = 1e-8);

}  // namespace keygraph
