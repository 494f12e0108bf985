#include <doctest.h>

#include <cmath>
#include <random>

#include "mgsag/gradcheck.hpp"
#include "mgsag/semantic_graphs.hpp"

using namespace mgsag;

namespace {

std::vector<Tensor> random_feats(std::size_t count, std::size_t dim,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Tensor> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = dist(rng);
    out.push_back(Tensor::vector(v));
  }
  return out;
}

void zero_values(Tensor t) {
  for (double& v : t.values()) v = 0.0;
}

}  // namespace

TEST_CASE("single-clause bipartite attention is all ones") {
  ParamStore store(1);
  auto params = register_fgsag(store, 6);
  auto clause = random_feats(1, 6, 3);
  auto keywords = random_feats(4, 6, 4);
  ForwardContext ctx;
  auto att = fgsag_attention(clause, keywords, params, FgsagNorm::OverClauses, ctx);
  REQUIRE(att.lanes.size() == 4);
  for (const auto& lane : att.lanes) {
    REQUIRE(lane.size() == 1);
    CHECK(lane.value(0) == doctest::Approx(1.0));
  }
}

TEST_CASE("keyword columns are simplices over clauses") {
  ParamStore store(2);
  auto params = register_fgsag(store, 6);
  auto clauses = random_feats(5, 6, 5);
  auto keywords = random_feats(3, 6, 6);
  ForwardContext ctx;
  auto att = fgsag_attention(clauses, keywords, params, FgsagNorm::OverClauses, ctx);
  auto dense = att.dense(5, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    double col_sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(dense[i][j] >= 0.0);
      col_sum += dense[i][j];
    }
    CHECK(std::abs(col_sum - 1.0) < 1e-9);
  }
}

TEST_CASE("the keyword normalization switch flips the simplex direction") {
  ParamStore store(3);
  auto params = register_fgsag(store, 6);
  auto clauses = random_feats(4, 6, 7);
  auto keywords = random_feats(3, 6, 8);
  ForwardContext ctx;
  auto att = fgsag_attention(clauses, keywords, params, FgsagNorm::OverKeywords, ctx);
  auto dense = att.dense(4, 3);
  for (std::size_t i = 0; i < 4; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < 3; ++j) row_sum += dense[i][j];
    CHECK(std::abs(row_sum - 1.0) < 1e-9);
  }
}

TEST_CASE("identical clauses draw equal attention from every keyword") {
  ParamStore store(4);
  auto params = register_fgsag(store, 6);
  Tensor same = random_feats(1, 6, 9)[0];
  std::vector<Tensor> clauses{same, Tensor::vector(same.values())};
  auto keywords = random_feats(2, 6, 10);
  ForwardContext ctx;
  auto att = fgsag_attention(clauses, keywords, params, FgsagNorm::OverClauses, ctx);
  for (const auto& lane : att.lanes) {
    CHECK(lane.value(0) == doctest::Approx(0.5));
    CHECK(lane.value(1) == doctest::Approx(0.5));
  }
}

TEST_CASE("empty keyword set degrades to a residual tanh") {
  ParamStore store(5);
  auto params = register_fgsag(store, 4);
  auto clauses = random_feats(3, 4, 11);
  ForwardContext ctx;
  auto result = fgsag_forward(clauses, {}, params, FgsagNorm::OverClauses, 0.0, ctx);
  CHECK(result.degraded);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t c = 0; c < 4; ++c) {
      const double expected =
          std::tanh(clauses[i].value(c) + store.at("fgsag.b").value(c));
      CHECK(result.vb[i].value(c) == doctest::Approx(expected));
    }
}

TEST_CASE("zero transform and bias reduce the update to tanh(v)") {
  ParamStore store(6);
  auto params = register_fgsag(store, 4);
  zero_values(store.at("fgsag.W3"));
  zero_values(store.at("fgsag.b"));
  auto clauses = random_feats(3, 4, 12);
  auto keywords = random_feats(2, 4, 13);
  ForwardContext ctx;
  auto att = fgsag_attention(clauses, keywords, params, FgsagNorm::OverClauses, ctx);
  auto vb = fgsag_update(clauses, att, params);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(vb[i].value(c) == doctest::Approx(std::tanh(clauses[i].value(c))));
}

TEST_CASE("one clause one keyword traces to tanh(v + W3 v + b)") {
  ParamStore store(7);
  auto params = register_fgsag(store, 3);
  auto clauses = random_feats(1, 3, 14);
  auto keywords = random_feats(1, 3, 15);
  ForwardContext ctx;
  auto result = fgsag_forward(clauses, keywords, params, FgsagNorm::OverClauses, 0.0, ctx);

  const auto& W3 = store.at("fgsag.W3");
  const auto& b = store.at("fgsag.b");
  for (std::size_t c = 0; c < 3; ++c) {
    double w3v = 0.0;
    for (std::size_t k = 0; k < 3; ++k) w3v += W3.at(c, k) * clauses[0].value(k);
    const double expected = std::tanh(clauses[0].value(c) + w3v + b.value(c));
    CHECK(result.vb[0].value(c) == doctest::Approx(expected));
  }
}

TEST_CASE("single-node clause graph reduces to ReLU(W1 v + b)") {
  ParamStore store(8);
  auto params = register_cgsag(store, 3, 1);
  auto clauses = random_feats(1, 3, 16);
  ForwardContext ctx;
  auto out = gat_layer(clauses, params.layers[0], 0.2, ctx);
  const auto& W1 = store.at("cgsag.layer0.W1");
  const auto& b = store.at("cgsag.layer0.b");
  for (std::size_t c = 0; c < 3; ++c) {
    double w1v = 0.0;
    for (std::size_t k = 0; k < 3; ++k) w1v += W1.at(c, k) * clauses[0].value(k);
    CHECK(out[0].value(c) == doctest::Approx(std::max(0.0, w1v + b.value(c))));
  }
}

TEST_CASE("clause-graph attention rows are simplices over all clauses") {
  ParamStore store(9);
  auto params = register_cgsag(store, 5, 2);
  auto clauses = random_feats(6, 5, 17);
  std::vector<std::vector<double>> probe;
  ForwardContext ctx;
  ctx.simplex_probe = &probe;
  cgsag_forward(clauses, params, 0.0, ctx);
  REQUIRE(probe.size() == 2 * 6);  // two layers, one row per clause
  for (const auto& row : probe) {
    REQUIRE(row.size() == 6);  // self-loop included: |N(i)| = |D|
    double sum = 0.0;
    for (double a : row) {
      CHECK(a >= 0.0);
      sum += a;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("identical node features give uniform attention rows") {
  ParamStore store(10);
  auto params = register_cgsag(store, 4, 1);
  Tensor proto = random_feats(1, 4, 18)[0];
  std::vector<Tensor> clauses;
  for (int i = 0; i < 5; ++i) clauses.push_back(Tensor::vector(proto.values()));
  std::vector<std::vector<double>> probe;
  ForwardContext ctx;
  ctx.simplex_probe = &probe;
  gat_layer(clauses, params.layers[0], 0.2, ctx);
  for (const auto& row : probe)
    for (double a : row) CHECK(a == doctest::Approx(0.2));
}

TEST_CASE("two stacked layers match an independent hand computation") {
  // Fixed tiny parameters, d_w = 2, two clauses; everything recomputed here
  // with plain scalar arithmetic.
  ParamStore store(11);
  auto params = register_cgsag(store, 2, 2);
  const std::vector<double> w1 = {0.3, -0.2, 0.5, 0.1};
  const std::vector<double> w2 = {0.2, 0.4, -0.3, 0.6};
  const std::vector<double> w3 = {-0.5, 0.1, 0.2, 0.3};
  const std::vector<double> wv = {0.7, -0.4, 0.2, 0.5};
  const std::vector<double> bv = {0.05, -0.1};
  for (int layer = 0; layer < 2; ++layer) {
    const std::string p = "cgsag.layer" + std::to_string(layer);
    store.at(p + ".W1").values() = w1;
    store.at(p + ".W2").values() = w2;
    store.at(p + ".W3").values() = w3;
    store.at(p + ".w").values() = wv;
    store.at(p + ".b").values() = bv;
  }
  std::vector<std::vector<double>> v = {{0.6, -0.3}, {-0.1, 0.8}};
  std::vector<Tensor> clauses{Tensor::vector(v[0]), Tensor::vector(v[1])};

  auto matvec = [](const std::vector<double>& m, const std::vector<double>& x) {
    return std::vector<double>{m[0] * x[0] + m[1] * x[1], m[2] * x[0] + m[3] * x[1]};
  };
  auto layer_oracle = [&](const std::vector<std::vector<double>>& in) {
    std::vector<std::vector<double>> out(2);
    for (int i = 0; i < 2; ++i) {
      double e[2], a[2];
      for (int j = 0; j < 2; ++j) {
        auto si = matvec(w2, in[i]);
        auto nj = matvec(w3, in[j]);
        const double score = wv[0] * std::tanh(si[0]) + wv[1] * std::tanh(si[1]) +
                             wv[2] * std::tanh(nj[0]) + wv[3] * std::tanh(nj[1]);
        e[j] = score > 0 ? score : 0.2 * score;  // LeakyReLU
      }
      const double mx = std::max(e[0], e[1]);
      const double z0 = std::exp(e[0] - mx), z1 = std::exp(e[1] - mx);
      a[0] = z0 / (z0 + z1);
      a[1] = z1 / (z0 + z1);
      std::vector<double> agg(2, 0.0);
      for (int j = 0; j < 2; ++j) {
        auto msg = matvec(w1, in[j]);
        agg[0] += a[j] * msg[0];
        agg[1] += a[j] * msg[1];
      }
      out[i] = {std::max(0.0, agg[0] + bv[0]), std::max(0.0, agg[1] + bv[1])};
    }
    return out;
  };
  auto expected = layer_oracle(layer_oracle(v));

  ForwardContext ctx;
  auto vc = cgsag_forward(clauses, params, 0.0, ctx);
  for (int i = 0; i < 2; ++i)
    for (int c = 0; c < 2; ++c)
      CHECK(vc[i].value(c) == doctest::Approx(expected[i][c]).epsilon(1e-12));
}

TEST_CASE("stacked output keeps shape and is nonnegative") {
  ParamStore store(12);
  auto params = register_cgsag(store, 7, 2);
  auto clauses = random_feats(4, 7, 19);
  ForwardContext ctx;
  auto vc = cgsag_forward(clauses, params, 0.0, ctx);
  REQUIRE(vc.size() == 4);
  for (const auto& t : vc) {
    REQUIRE(t.shape() == std::vector<std::size_t>{7});
    for (std::size_t c = 0; c < 7; ++c) CHECK(t.value(c) >= 0.0);
  }
}

TEST_CASE("both graphs are clause-permutation equivariant, bit for bit") {
  ParamStore store(13);
  auto fgsag = register_fgsag(store, 6);
  auto cgsag = register_cgsag(store, 6, 2);
  auto clauses = random_feats(5, 6, 20);
  auto keywords = random_feats(3, 6, 21);
  ForwardContext ctx;

  auto base_fg = fgsag_forward(clauses, keywords, fgsag, FgsagNorm::OverClauses, 0.0, ctx);
  auto base_vc = cgsag_forward(clauses, cgsag, 0.0, ctx);

  const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  std::vector<Tensor> permuted;
  for (std::size_t p : perm) permuted.push_back(clauses[p]);
  auto perm_fg = fgsag_forward(permuted, keywords, fgsag, FgsagNorm::OverClauses, 0.0, ctx);
  auto perm_vc = cgsag_forward(permuted, cgsag, 0.0, ctx);

  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t c = 0; c < 6; ++c) {
      CHECK(perm_fg.vb[i].value(c) == base_fg.vb[perm[i]].value(c));
      CHECK(perm_vc[i].value(c) == base_vc[perm[i]].value(c));
    }
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(perm_fg.alpha[i][j] == base_fg.alpha[perm[i]][j]);
  }
}

TEST_CASE("FGSAG and CGSAG gradients pass the finite-difference oracle") {
  ParamStore store(14);
  auto fgsag = register_fgsag(store, 4);
  auto cgsag = register_cgsag(store, 4, 2);
  auto clauses = random_feats(3, 4, 22);
  auto keywords = random_feats(2, 4, 23);

  SUBCASE("normalized over clauses") {
    auto fn = [&](ParamStore&) {
      ForwardContext ctx;
      auto fg = fgsag_forward(clauses, keywords, fgsag, FgsagNorm::OverClauses, 0.0, ctx);
      auto vc = cgsag_forward(clauses, cgsag, 0.0, ctx);
      Tensor loss = Tensor::scalar(0.0);
      for (std::size_t i = 0; i < clauses.size(); ++i)
        loss = add(loss, add(sum(fg.vb[i]), sum(tanh(vc[i]))));
      return loss;
    };
    auto report = finite_difference_check(fn, store, 1e-5);
    CHECK(report.max_rel_err < 1e-4);
  }

  SUBCASE("normalized over keywords") {
    auto fn = [&](ParamStore&) {
      ForwardContext ctx;
      auto fg = fgsag_forward(clauses, keywords, fgsag, FgsagNorm::OverKeywords, 0.0, ctx);
      Tensor loss = Tensor::scalar(0.0);
      for (std::size_t i = 0; i < clauses.size(); ++i) loss = add(loss, sum(fg.vb[i]));
      return loss;
    };
    auto report = finite_difference_check(fn, store, 1e-5);
    CHECK(report.max_rel_err < 1e-4);
  }
}

TEST_CASE("attention export carries id, keywords, and the matrix") {
  auto json = attention_to_json("doc-1", {"storm", "fear"}, {{0.25, 0.75}, {0.5, 0.5}});
  CHECK(json.find("\"doc_id\":\"doc-1\"") != std::string::npos);
  CHECK(json.find("storm") != std::string::npos);
  CHECK(json.find("0.75") != std::string::npos);
}
