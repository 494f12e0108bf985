#include <doctest.h>

#include "mgsag/adam.hpp"
#include "mgsag/tensor.hpp"

using namespace mgsag;

TEST_CASE("zero gradients leave parameters unchanged") {
  ParamStore store(1);
  store.add_vector("p", 3, 2.5);
  store.zero_grad();
  AdamState adam;
  adam.step(store);
  for (double v : store.at("p").values()) CHECK(v == 2.5);
  CHECK(adam.step_count() == 1);
}

TEST_CASE("first Adam step on a unit-gradient scalar moves by about lr") {
  // m_hat = v_hat = 1 after bias correction, so p <- 1 - lr / (1 + eps).
  ParamStore store(1);
  store.add_scalar("p", 1.0);
  store.zero_grad();
  store.at("p").grad()[0] = 1.0;
  AdamState adam(AdamConfig{0.1});
  adam.step(store);
  CHECK(store.at("p").value(0) == doctest::Approx(0.9).epsilon(1e-7));
}

TEST_CASE("identical parameters with identical gradients update identically") {
  ParamStore store(1);
  store.add_vector("a", 2, 0.7);
  store.add_vector("b", 2, 0.7);
  store.zero_grad();
  store.at("a").grad() = {0.3, -0.2};
  store.at("b").grad() = {0.3, -0.2};
  AdamState adam;
  adam.step(store);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(store.at("a").value(i) == store.at("b").value(i));
}

TEST_CASE("missing gradient names the parameter") {
  ParamStore store(1);
  store.add_scalar("good", 1.0);
  store.add_scalar("orphan", 1.0);
  store.zero_grad();
  store.at("orphan").clear_grad();
  AdamState adam;
  try {
    adam.step(store);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("orphan") != std::string::npos);
  }
}

TEST_CASE("gradients are zeroed after a step") {
  ParamStore store(1);
  store.add_scalar("p", 1.0);
  store.zero_grad();
  store.at("p").grad()[0] = 2.0;
  AdamState adam;
  adam.step(store);
  CHECK(store.at("p").grad()[0] == 0.0);
}

TEST_CASE("two steps with constant gradient keep moving the same direction") {
  ParamStore store(1);
  store.add_scalar("p", 1.0);
  AdamState adam(AdamConfig{0.1});
  for (int i = 0; i < 2; ++i) {
    store.zero_grad();
    store.at("p").grad()[0] = 1.0;
    adam.step(store);
  }
  CHECK(store.at("p").value(0) == doctest::Approx(0.8).epsilon(1e-6));
}
