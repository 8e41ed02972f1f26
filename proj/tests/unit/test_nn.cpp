// Copyright 2026 The skillmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "skillmix/nn/adam.hpp"
#include "skillmix/nn/checkpoint.hpp"
#include "skillmix/nn/gaussian.hpp"
#include "skillmix/nn/mlp.hpp"

using namespace skillmix;
using namespace skillmix::nn;

namespace {

NetworkSpec spec_of(std::vector<int> sizes, Activation h, OutputActivation o, uint64_t seed) {
  NetworkSpec s;
  s.layer_sizes = std::move(sizes);
  s.hidden_activation = h;
  s.output_activation = o;
  s.seed = seed;
  return s;
}

// Perturbs biases too, so gradient checks are not taken at zero bias.
Mlp random_net(std::vector<int> sizes, Activation h, OutputActivation o, uint64_t seed) {
  Mlp net(spec_of(std::move(sizes), h, o, seed));
  Rng rng(seed + 1000);
  Vec flat = net.params().flatten();
  flat += testing::random_vec(rng, static_cast<int>(flat.size()), 0.1);
  net.params().unflatten(flat);
  return net;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST_CASE("zero network outputs zero and a sigmoid head outputs one half") {
  Mlp lin(spec_of({3, 4, 2}, Activation::relu, OutputActivation::linear, 1));
  lin.params() = lin.params().zeros_like();
  CHECK(lin.forward(Vec::Ones(3)) == Vec::Zero(2));

  Mlp sig(spec_of({3, 4, 1}, Activation::tanh, OutputActivation::sigmoid, 1));
  sig.params() = sig.params().zeros_like();
  CHECK(sig.forward(Vec::Constant(3, 2.5))[0] == 0.5);
}

TEST_CASE("single linear layer") {
  NetworkParameters p;
  p.weights = {Mat::Constant(1, 1, 2.0)};
  p.biases = {Vec::Zero(1)};
  Mlp net(spec_of({1, 1}, Activation::relu, OutputActivation::linear, 0), p);
  CHECK(net.forward(Vec::Constant(1, 3.0))[0] == 6.0);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(Mlp(spec_of({3}, Activation::relu, OutputActivation::linear, 0)), Error);
  CHECK_THROWS_AS(Mlp(spec_of({3, 0, 1}, Activation::relu, OutputActivation::linear, 0)), Error);
  Mlp net(spec_of({3, 2}, Activation::relu, OutputActivation::linear, 0));
  CHECK_THROWS_AS(net.forward(Vec::Zero(4)), Error);
}

TEST_CASE("batched forward matches per-sample forward") {
  Mlp net = random_net({5, 8, 3}, Activation::tanh, OutputActivation::linear, 4);
  Rng rng(5);
  const Mat x = testing::random_mat(rng, 5, 7);
  const Mat y = net.forward_batch(x);
  for (int c = 0; c < 7; ++c) CHECK((y.col(c) - net.forward(x.col(c))).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("parameter and input gradients match finite differences") {
  for (Activation h : {Activation::relu, Activation::tanh}) {
    for (OutputActivation o : {OutputActivation::linear, OutputActivation::sigmoid}) {
      for (uint64_t seed = 0; seed < 10; ++seed) {
        Mlp net = random_net({5, 8, 3}, h, o, seed);
        Rng rng(seed + 77);
        const Mat x = testing::random_mat(rng, 5, 2);
        const Mat g = testing::random_mat(rng, 3, 2);
        const BackwardResult br = net.backward(net.forward_cached(x), g);

        auto loss_of_params = [&](const Vec& flat) {
          Mlp probe = net;
          probe.params().unflatten(flat);
          return (probe.forward_batch(x).array() * g.array()).sum();
        };
        const Vec fd = testing::central_diff(loss_of_params, net.params().flatten());
        CHECK(testing::max_rel_error(br.grads.flatten(), fd) < 1e-4);

        auto loss_of_input = [&](const Vec& flat) {
          const Mat xi = Eigen::Map<const Mat>(flat.data(), 5, 2);
          return (net.forward_batch(xi).array() * g.array()).sum();
        };
        const Vec xin = Eigen::Map<const Vec>(x.data(), x.size());
        const Vec fdx = testing::central_diff(loss_of_input, xin);
        const Vec gx = Eigen::Map<const Vec>(br.input_grad.data(), br.input_grad.size());
        CHECK(testing::max_rel_error(gx, fdx) < 1e-4);
      }
    }
  }
}

TEST_CASE("linear network input gradient is the transposed weight") {
  NetworkParameters p;
  Rng rng(2);
  p.weights = {testing::random_mat(rng, 3, 4)};
  p.biases = {testing::random_vec(rng, 3)};
  Mlp net(spec_of({4, 3}, Activation::relu, OutputActivation::linear, 0), p);
  const Mat x = testing::random_mat(rng, 4, 1);
  const Mat g = testing::random_mat(rng, 3, 1);
  const BackwardResult br = net.backward(net.forward_cached(x), g);
  CHECK((br.input_grad - p.weights[0].transpose() * g).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero upstream gradient gives zero gradients") {
  Mlp net = random_net({5, 8, 3}, Activation::relu, OutputActivation::sigmoid, 9);
  Rng rng(1);
  const Mat x = testing::random_mat(rng, 5, 3);
  const BackwardResult br = net.backward(net.forward_cached(x), Mat::Zero(3, 3));
  CHECK(br.grads.flatten().cwiseAbs().maxCoeff() == 0.0);
  CHECK(br.input_grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("input-gradient penalty of a single sigmoid unit") {
  NetworkParameters p;
  p.weights = {(Mat(1, 2) << 1.0, 0.0).finished()};
  p.biases = {Vec::Zero(1)};
  Mlp net(spec_of({2, 1}, Activation::tanh, OutputActivation::sigmoid, 0), p);
  const PenaltyResult r = net.grad_penalty(Mat::Zero(2, 1), Vec::Ones(2));
  const double s = sigmoid(0.0);
  CHECK(r.value == doctest::Approx(std::pow(s * (1 - s), 2)).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("penalty vanishes with zero weights") {
  Mlp net(spec_of({4, 8, 1}, Activation::tanh, OutputActivation::sigmoid, 3));
  NetworkParameters p = net.params().zeros_like();
  p.biases[0] = Vec::Constant(8, 0.3);
  net.params() = p;
  Rng rng(1);
  const PenaltyResult r = net.grad_penalty(testing::random_mat(rng, 4, 3), Vec::Ones(4));
  CHECK(r.value == 0.0);
  CHECK(r.grads.flatten().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("penalty parameter gradients match finite differences") {
  for (OutputActivation o : {OutputActivation::sigmoid, OutputActivation::linear}) {
    for (uint64_t seed = 0; seed < 10; ++seed) {
      Mlp net = random_net({4, 8, 1}, Activation::tanh, o, seed);
      Rng rng(seed + 11);
      const Mat x = testing::random_mat(rng, 4, 3);
      Vec mask = Vec::Ones(4);
      mask[3] = 0.0;  // one held-fixed slot, as for the condition input
      const PenaltyResult r = net.grad_penalty(x, mask);

      auto penalty_of = [&](const Vec& flat) {
        Mlp probe = net;
        probe.params().unflatten(flat);
        return probe.grad_penalty(x, mask).value;
      };
      const Vec fd = testing::central_diff(penalty_of, net.params().flatten());
      CHECK(testing::max_rel_error(r.grads.flatten(), fd) < 1e-3);

      // value itself against finite differences of the output
      double value = 0.0;
      for (int c = 0; c < 3; ++c) {
        auto out = [&](const Vec& xi) { return net.forward(xi)[0]; };
        const Vec g = testing::central_diff(out, x.col(c), 1e-6);
        value += g.cwiseProduct(mask).squaredNorm();
      }
      CHECK(testing::rel_error(r.value, value) < 1e-6);
    }
  }
}

TEST_CASE("penalty needs smooth hidden units") {
  Mlp net(spec_of({4, 8, 1}, Activation::relu, OutputActivation::sigmoid, 3));
  try {
    net.grad_penalty(Mat::Zero(4, 1), Vec::Ones(4));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "unsupported_for_penalty");
  }
}

TEST_CASE("adam with zero gradients only advances the step counter") {
  Mlp net = random_net({3, 4, 2}, Activation::relu, OutputActivation::linear, 1);
  OptimizerState st = OptimizerState::for_params(net.params(), AdamConfig{});
  const NetworkParameters before = net.params();
  adam_step(net.params(), net.params().zeros_like(), st);
  CHECK(net.params() == before);
  CHECK(st.step == 1);
}

TEST_CASE("first adam step has magnitude close to the learning rate") {
  Mlp net = random_net({3, 4, 2}, Activation::relu, OutputActivation::linear, 1);
  AdamConfig cfg;
  cfg.learning_rate = 1e-3;
  OptimizerState st = OptimizerState::for_params(net.params(), cfg);
  Rng rng(4);
  NetworkParameters g = net.params().zeros_like();
  g.unflatten(testing::random_vec(rng, static_cast<int>(g.count())));
  const Vec before = net.params().flatten();
  adam_step(net.params(), g, st);
  const Vec delta = net.params().flatten() - before;
  const Vec gf = g.flatten();
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    // m_hat = g, v_hat = g^2 after bias correction
    const double expected = -cfg.learning_rate * gf[i] / (std::abs(gf[i]) + cfg.epsilon);
    CHECK(delta[i] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("adam is deterministic and rejects non-finite gradients") {
  Mlp a = random_net({3, 4, 2}, Activation::relu, OutputActivation::linear, 1);
  Mlp b = a;
  OptimizerState sa = OptimizerState::for_params(a.params(), {}), sb = sa;
  Rng rng(4);
  NetworkParameters g = a.params().zeros_like();
  g.unflatten(testing::random_vec(rng, static_cast<int>(g.count())));
  adam_step(a.params(), g, sa);
  adam_step(b.params(), g, sb);
  CHECK(a.params() == b.params());

  g.weights[0](0, 0) = std::nan("");
  CHECK_THROWS_AS(adam_step(a.params(), g, sa), Error);
}

TEST_CASE("gaussian log density at the mean") {
  for (int d : {1, 4, 7}) {
    const double lp = gaussian_log_prob(Vec::Zero(d), Vec::Zero(d), Vec::Zero(d));
    CHECK(lp == doctest::Approx(-0.5 * d * std::log(2 * M_PI)).epsilon(1e-12));
  }
}

TEST_CASE("gaussian log density is symmetric about the mean") {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vec mean = testing::random_vec(rng, 4), delta = testing::random_vec(rng, 4);
    const Vec ls = testing::random_vec(rng, 4, 0.5);
    CHECK(gaussian_log_prob(mean + delta, mean, ls) == doctest::Approx(gaussian_log_prob(mean - delta, mean, ls)));
  }
}

TEST_CASE("narrow gaussian samples stay near the mean") {
  Rng rng(9);
  const Vec mean = Vec::Constant(4, 0.3);
  const Vec ls = Vec::Constant(4, kLogStdMin);
  int inside = 0;
  for (int i = 0; i < 2000; ++i) {
    const GaussianSample s = gaussian_sample(mean, ls, rng);
    inside += (s.action - mean).cwiseAbs().maxCoeff() < 0.05 ? 1 : 0;
    CHECK(s.log_prob == doctest::Approx(gaussian_log_prob(s.action, mean, ls)));
  }
  const double sigma = std::exp(kLogStdMin);
  const double expected = std::pow(std::erf(0.05 / (sigma * std::sqrt(2.0))), 4);
  CHECK(inside / 2000.0 == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("narrow one-dimensional gaussian stays within 0.05 with probability above 0.99") {
  const double sigma = std::exp(kLogStdMin);
  CHECK(std::erf(0.05 / (sigma * std::sqrt(2.0))) > 0.99);
  Rng rng(10);
  int inside = 0;
  for (int i = 0; i < 5000; ++i) {
    inside += std::abs(gaussian_sample(Vec::Zero(1), Vec::Constant(1, kLogStdMin), rng).action[0]) < 0.05 ? 1 : 0;
  }
  CHECK(inside / 5000.0 > 0.99);
}

TEST_CASE("gaussian log density gradients match finite differences") {
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const Vec a = testing::random_vec(rng, 4), mean = testing::random_vec(rng, 4);
    const Vec ls = testing::random_vec(rng, 4, 0.3);
    const GaussianGrad g = gaussian_log_prob_grad(a, mean, ls);
    const Vec fd_mean = testing::central_diff([&](const Vec& m) { return gaussian_log_prob(a, m, ls); }, mean);
    const Vec fd_ls = testing::central_diff([&](const Vec& l) { return gaussian_log_prob(a, mean, l); }, ls);
    CHECK(testing::max_rel_error(g.d_mean, fd_mean) < 1e-6);
    CHECK(testing::max_rel_error(g.d_log_std, fd_ls) < 1e-6);
  }
}

TEST_CASE("log std clamp bounds") {
  Vec ls(3);
  ls << -10, 0.2, 5;
  const Vec c = clamp_log_std(ls);
  CHECK(c[0] == kLogStdMin);
  CHECK(c[1] == 0.2);
  CHECK(c[2] == kLogStdMax);
}

TEST_CASE("checkpoint round trip is bit identical") {
  Mlp net = random_net({5, 8, 3}, Activation::tanh, OutputActivation::sigmoid, 21);
  Checkpoint ck{"discriminator", net, {{"loss_mode", "vanilla"}}};
  const auto dir = testing::temp_dir("nn_ckpt");
  save_checkpoint(ck, dir / "d.json");
  const Checkpoint back = load_checkpoint(dir / "d.json");
  CHECK(back.role == "discriminator");
  CHECK(back.network.spec() == net.spec());
  CHECK(back.network.params() == net.params());
  CHECK(back.metadata == ck.metadata);
  Rng rng(2);
  const Mat x = testing::random_mat(rng, 5, 10);
  CHECK(back.network.forward_batch(x) == net.forward_batch(x));

  const nlohmann::json j = checkpoint_to_json(ck);
  CHECK(j.at("format_version") == kCheckpointFormatVersion);
  CHECK(j.at("layers").size() == 4);
  CHECK(j.at("layers")[0].at("name") == "W0");
  CHECK(j.dump() == checkpoint_to_json(checkpoint_from_json(j)).dump());
}

TEST_CASE("checkpoint loader rejects bad shapes and versions") {
  Mlp net = random_net({2, 3, 1}, Activation::tanh, OutputActivation::linear, 2);
  nlohmann::json j = checkpoint_to_json({"value", net, {}});
  nlohmann::json bad = j;
  bad["format_version"] = 99;
  CHECK_THROWS_AS(checkpoint_from_json(bad), Error);
  bad = j;
  bad["layers"][0]["values"].erase(0);
  CHECK_THROWS_AS(checkpoint_from_json(bad), Error);
}

TEST_CASE("flatten and unflatten are inverse") {
  Mlp net = random_net({3, 5, 2}, Activation::relu, OutputActivation::linear, 8);
  NetworkParameters p = net.params().zeros_like();
  p.unflatten(net.params().flatten());
  CHECK(p == net.params());
  CHECK(p.count() == static_cast<size_t>(3 * 5 + 5 + 5 * 2 + 2));
}
