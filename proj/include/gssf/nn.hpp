// Copyright 2026 The GSSF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense recurrent-network kernels shared by the encoder and decoder.

#ifndef GSSF_NN_HPP_
#define GSSF_NN_HPP_

#include <Eigen/Core>
#include <cmath>

namespace gssf::nn {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Derived>
auto sigmoid(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return (Scalar(1) + (-x.array()).exp()).inverse().matrix();
}

// Numerically stable log-softmax of a vector.
template <class Derived>
Vector<typename Derived::Scalar> log_softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  const Scalar peak = logits.maxCoeff();
  const Scalar lse = peak + std::log((logits.array() - peak).exp().sum());
  return (logits.array() - lse).matrix();
}

template <class Derived>
Vector<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

// Gated recurrent unit. Row blocks of W, U and b hold the update gate z,
// the reset gate r and the candidate n, in that order:
//   z = sigmoid(Wz x + Uz h + bz)
//   r = sigmoid(Wr x + Ur h + br)
//   n = tanh(Wn x + Un (r * h) + bn)
//   h' = (1 - z) * n + z * h
template <class Scalar>
struct GruWeights {
  Matrix<Scalar> W;  // 3H x I
  Matrix<Scalar> U;  // 3H x H
  Vector<Scalar> b;  // 3H

  GruWeights() = default;
  GruWeights(Eigen::Index input, Eigen::Index hidden)
      : W(Matrix<Scalar>::Zero(3 * hidden, input)),
        U(Matrix<Scalar>::Zero(3 * hidden, hidden)),
        b(Vector<Scalar>::Zero(3 * hidden)) {}

  Eigen::Index hidden() const { return U.cols(); }
  Eigen::Index input() const { return W.cols(); }
};

// Activations of one GRU step, kept for the backward pass.
template <class Scalar>
struct GruStep {
  Vector<Scalar> x, h_prev, z, r, n, reset_h, h;
};

template <class Scalar, class DerivedX, class DerivedH>
void gru_forward(const GruWeights<Scalar>& w, const Eigen::MatrixBase<DerivedX>& x,
                 const Eigen::MatrixBase<DerivedH>& h_prev, GruStep<Scalar>& step) {
  const Eigen::Index H = w.hidden();
  step.x = x;
  step.h_prev = h_prev;
  const Vector<Scalar> a = w.W * step.x + w.b;
  const Vector<Scalar> gates = a.head(2 * H) + w.U.topRows(2 * H) * step.h_prev;
  step.z = sigmoid(gates.head(H));
  step.r = sigmoid(gates.tail(H));
  step.reset_h = step.r.cwiseProduct(step.h_prev);
  step.n = (a.tail(H) + w.U.bottomRows(H) * step.reset_h).array().tanh().matrix();
  step.h = (Scalar(1) - step.z.array()).matrix().cwiseProduct(step.n) + step.z.cwiseProduct(step.h_prev);
}

// Accumulates weight gradients into `grad` and writes the gradients with
// respect to the step input and previous hidden state.
template <class Scalar, class DerivedD>
void gru_backward(const GruWeights<Scalar>& w, const GruStep<Scalar>& step,
                  const Eigen::MatrixBase<DerivedD>& dh, GruWeights<Scalar>& grad, Vector<Scalar>& dx,
                  Vector<Scalar>& dh_prev) {
  const Eigen::Index H = w.hidden();
  const auto one = Scalar(1);
  const Vector<Scalar> dn = dh.cwiseProduct((one - step.z.array()).matrix());
  const Vector<Scalar> dz = dh.cwiseProduct(step.h_prev - step.n);
  dh_prev = dh.cwiseProduct(step.z);

  Vector<Scalar> da(3 * H);
  da.tail(H) = dn.array() * (one - step.n.array().square());
  da.head(H) = dz.array() * step.z.array() * (one - step.z.array());
  const Vector<Scalar> d_reset_h = w.U.bottomRows(H).transpose() * da.tail(H);
  da.segment(H, H) = d_reset_h.array() * step.h_prev.array() * step.r.array() * (one - step.r.array());
  dh_prev += d_reset_h.cwiseProduct(step.r);
  dh_prev.noalias() += w.U.topRows(2 * H).transpose() * da.head(2 * H);

  grad.W.noalias() += da * step.x.transpose();
  grad.b += da;
  grad.U.topRows(2 * H).noalias() += da.head(2 * H) * step.h_prev.transpose();
  grad.U.bottomRows(H).noalias() += da.tail(H) * step.reset_h.transpose();
  dx.noalias() = w.W.transpose() * da;
}

}  // namespace gssf::nn

#endif  // GSSF_NN_HPP_
