// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "irsec/channel.hpp"
#include "irsec/errors.hpp"
#include "irsec/mcoracle.hpp"

using namespace irsec;
using namespace irsec::channel;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

LinkConfig miso_cfg(int n_tx = 10) {
  LinkConfig c;
  c.n_tx = n_tx;
  return c;
}

}  // namespace

TEST_CASE("pathloss at the default link budget") {
  const LinkConfig cfg;
  CHECK(pathloss(cfg) == doctest::Approx(7.599e-8).epsilon(1e-4));
  LinkConfig a = cfg, b = cfg;
  a.phi_inc = 0.0;
  b.phi_inc = std::numbers::pi / 3.0;
  CHECK(pathloss(a) == doctest::Approx(4.0 * pathloss(b)).epsilon(1e-12));
  LinkConfig far = cfg;
  far.d1 *= 2.0;
  far.d2 *= 2.0;
  CHECK(pathloss(far) == doctest::Approx(pathloss(cfg) / 16.0).epsilon(1e-14));
  LinkConfig grazing = cfg;
  grazing.phi_inc = std::numbers::pi / 2.0;
  CHECK(pathloss(grazing) < 1e-38);
  double prev = pathloss(cfg);
  for (double d = 51.0; d < 200.0; d += 10.0) {
    LinkConfig c = cfg;
    c.d1 = d;
    CHECK(pathloss(c) < prev);
    prev = pathloss(c);
  }
}

TEST_CASE("config validation") {
  LinkConfig c;
  CHECK_NOTHROW(c.validate());
  auto bad = [](auto mutate) {
    LinkConfig x;
    mutate(x);
    CHECK_THROWS_AS(x.validate(), ConfigError);
  };
  bad([](LinkConfig& x) { x.d1 = 0.0; });
  bad([](LinkConfig& x) { x.d2 = -1.0; });
  bad([](LinkConfig& x) { x.phi_inc = 2.0; });
  bad([](LinkConfig& x) { x.sigma2 = 0.0; });
  bad([](LinkConfig& x) { x.p_t = -1e-3; });
  bad([](LinkConfig& x) { x.n_elems = 0; });
  bad([](LinkConfig& x) { x.n_tx = 0; });
  bad([](LinkConfig& x) { x.bandwidth = 0.0; });
  bad([](LinkConfig& x) { x.g_t = std::nan(""); });
  bad([](LinkConfig& x) {
    x.n_tx = 2;
    x.precoder = {{1.0, 0.0}};
  });
  bad([](LinkConfig& x) {
    x.n_tx = 2;
    x.precoder = {{0.0, 0.0}, {0.0, 0.0}};
  });
}

TEST_CASE("SISO law parameters") {
  const LinkConfig cfg;
  const auto d = std::get<ScaledNoncentralChiSq>(siso_snr_dist(cfg));
  CHECK(d.lambda == doctest::Approx(161.00).epsilon(1e-4));
  CHECK(d.beta == doctest::Approx(1.165e-2).epsilon(1e-3));
  CHECK(snr_mean(d) == doctest::Approx(1.887).epsilon(1e-3));
  CHECK(snr_mean(d) == doctest::Approx(d.beta * (1.0 + d.lambda)).epsilon(1e-15));

  LinkConfig c2 = cfg;
  c2.p_t *= 3.0;
  c2.sigma2 *= 0.5;
  c2.d1 = 80.0;
  const auto d2 = std::get<ScaledNoncentralChiSq>(siso_snr_dist(c2));
  CHECK(d2.lambda == d.lambda);
  CHECK(d2.beta / pathloss(c2) == doctest::Approx(6.0 * d.beta / pathloss(cfg)).epsilon(1e-14));

  LinkConfig m = cfg;
  m.n_tx = 2;
  CHECK_THROWS_AS(siso_snr_dist(m), ConfigError);
  LinkConfig z = cfg;
  z.p_t = 0.0;
  CHECK_THROWS_AS(siso_snr_dist(z), DomainError);
}

TEST_CASE("MISO kappa conventions") {
  const auto cfg = miso_cfg();
  const double zeta = pathloss(cfg);
  const double k = miso_kappa(cfg);
  CHECK(k == doctest::Approx(cfg.sigma2 / (2.0 * 100 * cfg.p_t * zeta)).epsilon(1e-14));
  for (const auto mode : {KappaMode::direct, KappaMode::paper_squared, KappaMode::paper_linear}) {
    LinkConfig hi = cfg;
    hi.p_t *= 4.0;
    const KappaOptions o{mode};
    const double ratio = miso_kappa(cfg, o) / miso_kappa(hi, o);
    CAPTURE(static_cast<int>(mode));
    if (mode == KappaMode::paper_squared) {
      // this convention is quadratic in p_t, so the mean scales by 16
      CHECK(ratio == doctest::Approx(16.0).epsilon(1e-12));
    } else {
      CHECK(ratio == doctest::Approx(4.0).epsilon(1e-12));
    }
  }
  KappaOptions fit{KappaMode::fitted, 7, 50000};
  LinkConfig hi = cfg;
  hi.p_t *= 4.0;
  CHECK(miso_kappa(cfg, fit) / miso_kappa(hi, fit) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rel(miso_kappa(cfg, fit), k) < 0.02);

  // kappa depends on f only through sum |f|^2
  LinkConfig rot = cfg;
  rot.precoder.assign(10, {0.0, 0.0});
  rot.precoder[0] = std::polar(0.6, 0.3);
  rot.precoder[3] = std::polar(0.8, -1.1);
  for (const auto mode : {KappaMode::direct, KappaMode::paper_squared, KappaMode::paper_linear}) {
    CHECK(miso_kappa(rot, {mode}) == doctest::Approx(miso_kappa(cfg, {mode})).epsilon(1e-14));
  }
  CHECK(std::get<Exponential>(miso_snr_dist(cfg)).kappa == k);
}

TEST_CASE("snr_cdf properties") {
  const LinkConfig cfg;
  const auto s = siso_snr_dist(cfg);
  const SnrDistribution e = Exponential{0.5};
  CHECK(snr_cdf(s, 0.0) == 0.0);
  CHECK(snr_cdf(e, 0.0) == 0.0);
  CHECK(snr_cdf(e, 2.0) == doctest::Approx(0.63212).epsilon(1e-5));
  for (const auto& d : {s, e}) {
    double prev = 0.0;
    for (double x = 0.0; x < 20.0; x += 0.01) {
      const double p = snr_cdf(d, x);
      CHECK(p >= prev);
      CHECK(p + snr_ccdf(d, x) == doctest::Approx(1.0).epsilon(1e-14));
      prev = p;
    }
    // upper tail: 1 - 1e-9 is reached
    double x = snr_mean(d);
    while (snr_ccdf(d, x) > 1e-9) x *= 1.5;
    CHECK(snr_cdf(d, x) >= 1.0 - 1e-9);
  }
}

TEST_CASE("SISO sampler determinism and p_t = 0") {
  const LinkConfig cfg;
  const auto a = sample_siso_snr(cfg, 42, 1000);
  const auto b = sample_siso_snr(cfg, 42, 1000);
  const auto c = sample_siso_snr(cfg, 43, 1000);
  CHECK(a.seed == 42);
  CHECK(a.kind == SampleKind::snr);
  CHECK(std::memcmp(a.values.data(), b.values.data(), 1000 * sizeof(double)) == 0);
  CHECK(a.values != c.values);
  // ranges compose
  std::vector<double> tail(400);
  sample_siso_snr_into(cfg, 42, 600, tail);
  CHECK(std::equal(tail.begin(), tail.end(), a.values.begin() + 600));
  for (double v : a.values) CHECK((std::isfinite(v) && v >= 0.0));

  LinkConfig z = cfg;
  z.p_t = 0.0;
  for (double v : sample_siso_snr(z, 1, 100).values) CHECK(v == 0.0);
  LinkConfig zm = miso_cfg();
  zm.p_t = 0.0;
  for (double v : sample_miso_snr(zm, 1, 100).values) CHECK(v == 0.0);
}

TEST_CASE("SISO sampler moments at 1e6 draws") {
  const LinkConfig cfg;
  const auto d = std::get<ScaledNoncentralChiSq>(siso_snr_dist(cfg));
  const auto m = mcoracle::empirical_moments(sample_siso_snr(cfg, 2024, 1000000));
  CHECK(rel(m.mean, d.beta * (1.0 + d.lambda)) < 0.01);
  CHECK(rel(m.variance, 2.0 * d.beta * d.beta * (1.0 + 2.0 * d.lambda)) < 0.01);
}

TEST_CASE("SISO CDF against the physical sampler at 20 quantiles") {
  const LinkConfig cfg;
  const auto dist = siso_snr_dist(cfg);
  auto batch = sample_siso_snr(cfg, 99, 1000000);
  std::sort(batch.values.begin(), batch.values.end());
  const double n = static_cast<double>(batch.values.size());
  for (int q = 1; q <= 20; ++q) {
    const double p = q / 21.0;
    const double x = batch.values[static_cast<std::size_t>(p * n)];
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    CAPTURE(p);
    CAPTURE(snr_cdf(dist, x));
    CHECK(std::abs(snr_cdf(dist, x) - p) <= 3.0 * sigma);
  }
}

TEST_CASE("CLT quality of the SISO law depends on N") {
  double prev = 1.0;
  for (const int n : {1, 4, 16, 100, 1000}) {
    LinkConfig cfg;
    cfg.n_elems = n;
    const double ks = mcoracle::ks_distance(sample_siso_snr(cfg, 5, 200000), siso_snr_dist(cfg));
    CAPTURE(n);
    CAPTURE(ks);
    CHECK(ks < prev);
    prev = ks;
    if (n < 8) CHECK(ks > 0.05);
    if (n >= 1000) CHECK(ks <= 0.01);
  }
}

TEST_CASE("MISO sampler follows the exponential law") {
  const auto cfg = miso_cfg();
  const auto batch = sample_miso_snr(cfg, 7, 200000);
  const auto m = mcoracle::empirical_moments(batch);
  const double k = miso_kappa(cfg);
  CHECK(rel(m.mean, 1.0 / k) < 0.01);
  CHECK(rel(m.variance, 1.0 / (k * k)) < 0.03);
  CHECK(mcoracle::ks_distance(batch, Exponential{1.0 / m.mean}) < 0.004);

  // mean scales with N sum |f|^2
  LinkConfig one = miso_cfg(1);
  one.n_elems = 25;
  const auto m1 = mcoracle::empirical_moments(sample_miso_snr(one, 8, 200000));
  CHECK(rel(m1.mean, 2.0 * 25 * one.p_t * pathloss(one) / one.sigma2) < 0.01);
}

TEST_CASE("MISO sampler scales with the precoder") {
  auto cfg = miso_cfg(3);
  cfg.precoder = {{0.5, 0.1}, {-0.2, 0.4}, {0.3, -0.6}};
  auto scaled = cfg;
  const std::complex<double> c{1.5, -2.0};
  for (auto& f : scaled.precoder) f *= c;
  const auto a = sample_miso_snr(cfg, 3, 500);
  const auto b = sample_miso_snr(scaled, 3, 500);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(b.values[i] == doctest::Approx(std::norm(c) * a.values[i]).epsilon(1e-12));
  }
  const auto again = sample_miso_snr(cfg, 3, 500);
  CHECK(std::memcmp(a.values.data(), again.values.data(), 500 * sizeof(double)) == 0);
  std::vector<double> part(100);
  sample_miso_snr_into(cfg, 3, 400, part);
  CHECK(std::equal(part.begin(), part.end(), a.values.begin() + 400));
}
