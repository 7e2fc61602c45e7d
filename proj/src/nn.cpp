#include "keygraph/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace keygraph {

void adamw_step(const std::vector<Parameter*>& params, const OptimizerConfig& cfg) {
  for (Parameter* p : params) {
    p->step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(p->step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(p->step));
    for (size_t i = 0; i < p->value.size(); ++i) {
      const double g = p->grad.v[i];
      p->m.v[i] = cfg.beta1 * p->m.v[i] + (1.0 - cfg.beta1) * g;
      p->v.v[i] = cfg.beta2 * p->v.v[i] + (1.0 - cfg.beta2) * g * g;
      const double m_hat = p->m.v[i] / bc1;
      const double v_hat = p->v.v[i] / bc2;
      p->value.v[i] -= cfg.learning_rate *
                       (m_hat / (std::sqrt(v_hat) + cfg.eps_num) +
                        cfg.weight_decay * p->value.v[i]);
    }
  }
}

void zero_grads(const std::vector<Parameter*>& params) {
  for (Parameter* p : params) p->zero_grad();
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (auto& x : out) x /= sum;
  return out;
}

std::pair<double, std::vector<double>> softmax_cross_entropy(
    const std::vector<double>& logits, int target) {
  if (target < 0 || static_cast<size_t>(target) >= logits.size())
    throw std::invalid_argument("softmax_cross_entropy: target out of range");
  const double m = *std::max_element(logits.begin(), logits.end());
  double rest = 0.0;  // sum of exp(z_i - m) over i != target
  std::vector<double> p(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    if (static_cast<int>(i) != target) rest += p[i];
  }
  const double et = p[target];
  // -log(et / (et + rest)) = log1p(rest / et); exact when the target dominates
  const double loss = std::log1p(rest / et);
  const double z = et + rest;
  for (auto& x : p) x /= z;
  std::vector<double> grad = p;
  grad[target] -= 1.0;
  return {loss, grad};
}

Tape::Var Tape::input(Tensor x) {
  Node n;
  n.value = std::move(x);
  return push(std::move(n));
}

Tape::Var Tape::param(Parameter& p) {
  Node n;
  n.value = p.value;
  n.source = &p;
  return push(std::move(n));
}

Tape::Var Tape::matmul(Var a, Var b) {
  const Tensor& ta = nodes_[a].value;
  const Tensor& tb = nodes_[b].value;
  Node n;
  n.value = keygraph::matmul(ta, tb);
  n.back = [a, b](Tape& t, Node& self) {
    // dA += G * B^T, dB += A^T * G
    matmul_acc(self.grad, transpose(t.nodes_[b].value), t.nodes_[a].grad);
    matmul_acc(transpose(t.nodes_[a].value), self.grad, t.nodes_[b].grad);
  };
  return push(std::move(n));
}

Tape::Var Tape::add(Var a, Var b) {
  const Tensor& ta = nodes_[a].value;
  const Tensor& tb = nodes_[b].value;
  if (!ta.same_shape(tb)) throw std::invalid_argument("add: shape mismatch");
  Node n;
  n.value = ta;
  for (size_t i = 0; i < n.value.size(); ++i) n.value.v[i] += tb.v[i];
  n.back = [a, b](Tape& t, Node& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      t.nodes_[a].grad.v[i] += self.grad.v[i];
      t.nodes_[b].grad.v[i] += self.grad.v[i];
    }
  };
  return push(std::move(n));
}

Tape::Var Tape::add_row(Var a, Var bias) {
  const Tensor& ta = nodes_[a].value;
  const Tensor& tb = nodes_[bias].value;
  if (tb.rows != 1 || tb.cols != ta.cols)
    throw std::invalid_argument("add_row: bias shape mismatch");
  Node n;
  n.value = ta;
  for (int r = 0; r < ta.rows; ++r)
    for (int c = 0; c < ta.cols; ++c) n.value(r, c) += tb(0, c);
  n.back = [a, bias](Tape& t, Node& self) {
    Tensor& ga = t.nodes_[a].grad;
    Tensor& gb = t.nodes_[bias].grad;
    for (int r = 0; r < self.grad.rows; ++r)
      for (int c = 0; c < self.grad.cols; ++c) {
        ga(r, c) += self.grad(r, c);
        gb(0, c) += self.grad(r, c);
      }
  };
  return push(std::move(n));
}

Tape::Var Tape::relu(Var a) {
  Node n;
  n.value = nodes_[a].value;
  for (auto& x : n.value.v) x = x > 0.0 ? x : 0.0;
  n.back = [a](Tape& t, Node& self) {
    const Tensor& x = t.nodes_[a].value;
    Tensor& ga = t.nodes_[a].grad;
    for (size_t i = 0; i < self.grad.size(); ++i)
      if (x.v[i] > 0.0) ga.v[i] += self.grad.v[i];
  };
  return push(std::move(n));
}

Tape::Var Tape::scale_shift(Var a, Var s, double c) {
  const Tensor& ts = nodes_[s].value;
  if (ts.rows != 1 || ts.cols != 1)
    throw std::invalid_argument("scale_shift: scale must be 1x1");
  const double k = c + ts(0, 0);
  Node n;
  n.value = nodes_[a].value;
  for (auto& x : n.value.v) x *= k;
  n.back = [a, s, c](Tape& t, Node& self) {
    const double kk = c + t.nodes_[s].value(0, 0);
    const Tensor& xa = t.nodes_[a].value;
    Tensor& ga = t.nodes_[a].grad;
    double ds = 0.0;
    for (size_t i = 0; i < self.grad.size(); ++i) {
      ga.v[i] += self.grad.v[i] * kk;
      ds += self.grad.v[i] * xa.v[i];
    }
    t.nodes_[s].grad(0, 0) += ds;
  };
  return push(std::move(n));
}

Tape::Var Tape::sum_rows(Var a) {
  const Tensor& ta = nodes_[a].value;
  Node n;
  n.value = Tensor(1, ta.cols);
  for (int r = 0; r < ta.rows; ++r)
    for (int c = 0; c < ta.cols; ++c) n.value(0, c) += ta(r, c);
  n.back = [a](Tape& t, Node& self) {
    Tensor& ga = t.nodes_[a].grad;
    for (int r = 0; r < ga.rows; ++r)
      for (int c = 0; c < ga.cols; ++c) ga(r, c) += self.grad(0, c);
  };
  return push(std::move(n));
}

Tape::Var Tape::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no parts");
  const int rows = nodes_[parts[0]].value.rows;
  int total = 0;
  for (Var p : parts) {
    if (nodes_[p].value.rows != rows)
      throw std::invalid_argument("concat_cols: row mismatch");
    total += nodes_[p].value.cols;
  }
  Node n;
  n.value = Tensor(rows, total);
  int off = 0;
  for (Var p : parts) {
    const Tensor& tp = nodes_[p].value;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < tp.cols; ++c) n.value(r, off + c) = tp(r, c);
    off += tp.cols;
  }
  n.back = [parts](Tape& t, Node& self) {
    int off2 = 0;
    for (Var p : parts) {
      Tensor& gp = t.nodes_[p].grad;
      for (int r = 0; r < gp.rows; ++r)
        for (int c = 0; c < gp.cols; ++c) gp(r, c) += self.grad(r, off2 + c);
      off2 += gp.cols;
    }
  };
  return push(std::move(n));
}

Tape::Var Tape::softmax_cross_entropy_loss(Var logits, int target) {
  const Tensor& tl = nodes_[logits].value;
  if (tl.rows != 1)
    throw std::invalid_argument("softmax_cross_entropy_loss: logits must be a row");
  auto [loss, grad] = keygraph::softmax_cross_entropy(tl.v, target);
  Node n;
  n.value = Tensor(1, 1);
  n.value(0, 0) = loss;
  n.back = [logits, grad = std::move(grad)](Tape& t, Node& self) {
    Tensor& gl = t.nodes_[logits].grad;
    const double seed = self.grad(0, 0);
    for (size_t i = 0; i < grad.size(); ++i) gl.v[i] += seed * grad[i];
  };
  return push(std::move(n));
}

void Tape::backward(Var loss, double seed) {
  Node& top = nodes_[loss];
  if (top.value.rows != 1 || top.value.cols != 1)
    throw std::invalid_argument("backward: loss must be scalar");
  for (auto& n : nodes_) {
    n.grad = Tensor(n.value.rows, n.value.cols);
  }
  top.grad(0, 0) = seed;
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.back) n.back(*this, n);
    if (n.source) {
      for (size_t k = 0; k < n.grad.size(); ++k)
        n.source->grad.v[k] += n.grad.v[k];
    }
  }
}

MLPBlock MLPBlock::make(const std::vector<int>& dims, Rng& rng) {
  if (dims.size() < 2) throw std::invalid_argument("MLPBlock: need >= 2 dims");
  MLPBlock b;
  for (size_t i = 0; i + 1 < dims.size(); ++i) {
    DenseLayer l;
    l.weight = Parameter(
        Tensor::randn(dims[i], dims[i + 1], std::sqrt(2.0 / dims[i]), rng));
    l.bias = Parameter(Tensor(1, dims[i + 1]));
    b.layers.push_back(std::move(l));
  }
  return b;
}

Tape::Var MLPBlock::forward(Tape& tape, Tape::Var x) {
  if (tape.value(x).cols != input_dim())
    throw std::invalid_argument("MLPBlock: input dimension mismatch");
  Tape::Var h = x;
  for (size_t i = 0; i < layers.size(); ++i) {
    Tape::Var w = tape.param(layers[i].weight);
    Tape::Var b = tape.param(layers[i].bias);
    h = tape.add_row(tape.matmul(h, w), b);
    if (i + 1 < layers.size()) h = tape.relu(h);
  }
  return h;
}

std::vector<Parameter*> MLPBlock::parameters() {
  std::vector<Parameter*> ps;
  for (auto& l : layers) {
    ps.push_back(&l.weight);
    ps.push_back(&l.bias);
  }
  return ps;
}

double finite_difference_check(const std::function<double()>& loss_fn,
                               const std::vector<Parameter*>& params,
                               double h, double atol) {
  double worst = 0.0;
  for (Parameter* p : params) {
    for (size_t i = 0; i < p->value.size(); ++i) {
      const double saved = p->value.v[i];
      p->value.v[i] = saved + h;
      const double fp = loss_fn();
      p->value.v[i] = saved - h;
      const double fm = loss_fn();
      p->value.v[i] = saved;
      const double fd = (fp - fm) / (2.0 * h);
      const double g = p->grad.v[i];
      const double mag = std::max(std::abs(fd), std::abs(g));
      const double err = mag > atol ? std::abs(fd - g) / mag : std::abs(fd - g);
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace keygraph
