#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "mcauc/data.hpp"
#include "mcauc/training.hpp"

using mcauc::Dataset;
using mcauc::Matrix;
using mcauc::SyntheticSpec;

TEST_SUITE("data") {

TEST_CASE("gen_synthetic is deterministic and split sizes follow the spec") {
  SyntheticSpec spec;
  spec.seed = 99;
  const auto a = mcauc::gen_synthetic(spec);
  const auto b = mcauc::gen_synthetic(spec);
  CHECK(a.train == b.train);
  CHECK(a.val == b.val);
  CHECK(a.test == b.test);
  CHECK(a.train.size() == 300);
  CHECK(a.val.size() == 300);
  CHECK(a.test.size() == 1500);
  CHECK(a.train.dims() == 2);
  CHECK(a.train.num_classes() == 3);

  SyntheticSpec other = spec;
  other.seed = 100;
  CHECK(mcauc::gen_synthetic(other).train != a.train);
}

TEST_CASE("default three-class mix lands within two points of the target") {
  SyntheticSpec spec;
  spec.per_class = {100, 100, 1000};  // test split holds 3000 examples
  spec.seed = 5;
  const auto splits = mcauc::gen_synthetic(spec);
  REQUIRE(splits.test.size() == 3000);
  const auto counts = mcauc::class_counts(splits.test.labels, 3);
  const double expected[3] = {0.1660, 0.3445, 0.4894};
  for (std::size_t cls = 0; cls < 3; ++cls) {
    const double freq = static_cast<double>(counts[cls]) / 3000.0;
    CHECK(std::abs(freq - expected[cls]) <= 0.02);
  }
}

TEST_CASE("near-zero spread separates perfectly and trains to accuracy 1") {
  SyntheticSpec spec;
  spec.spread = 1e-3;
  spec.per_class = {20, 20, 20};
  spec.seed = 11;
  const auto splits = mcauc::gen_synthetic(spec);

  mcauc::TrainConfig config;
  config.loss = mcauc::LossKind::kSoftmaxCe;
  config.epochs = 20;
  config.batch_size = 15;
  config.lr_start = 0.05;
  config.lr_end = 0.01;
  config.seed = 1;
  const mcauc::NormalizationParams norm = mcauc::fit_minmax(splits.train);
  const auto result = mcauc::train(mcauc::apply_minmax(norm, splits.train),
                                   mcauc::apply_minmax(norm, splits.val), {2, 8, 3}, config);
  CHECK(mcauc::accuracy_of(result.params, mcauc::apply_minmax(norm, splits.test)) == 1.0);
}

TEST_CASE("dataset files round-trip value-identically") {
  SyntheticSpec spec;
  spec.per_class = {4, 4, 4};
  spec.seed = 3;
  const auto splits = mcauc::gen_synthetic(spec);
  const std::string path = "test_dataset_roundtrip.csv";
  mcauc::save_dataset(splits.train, path);
  const Dataset loaded = mcauc::load_dataset(path);
  std::remove(path.c_str());
  CHECK(loaded == splits.train);
}

TEST_CASE("load_dataset validates the file") {
  const std::string path = "test_dataset_bad.csv";
  auto write_file = [&](const std::string& text) {
    std::ofstream out(path);
    out << text;
  };

  SUBCASE("well-formed two-row file") {
    write_file("f0,f1,label\n0.5,1.25,0\n-3.5,0.125,1\n");
    const Dataset ds = mcauc::load_dataset(path);
    CHECK(ds.size() == 2);
    CHECK(ds.dims() == 2);
    CHECK(ds.features(1, 0) == -3.5);
    CHECK(ds.labels == mcauc::LabelVector{0, 1});
  }
  SUBCASE("missing label column") {
    write_file("f0,f1\n0.5,1.25\n");
    CHECK_THROWS_WITH_AS(mcauc::load_dataset(path), doctest::Contains("label"),
                         std::runtime_error);
  }
  SUBCASE("ragged row reports its line number") {
    write_file("f0,f1,label\n0.5,1.25,0\n0.5,1\n");
    CHECK_THROWS_WITH_AS(mcauc::load_dataset(path), doctest::Contains("line 3"),
                         std::runtime_error);
  }
  SUBCASE("non-numeric feature cell") {
    write_file("f0,f1,label\n0.5,abc,0\n");
    CHECK_THROWS_WITH_AS(mcauc::load_dataset(path), doctest::Contains("non-numeric"),
                         std::runtime_error);
  }
  SUBCASE("non-integer label") {
    write_file("f0,f1,label\n0.5,1.0,1.5\n");
    CHECK_THROWS_WITH_AS(mcauc::load_dataset(path), doctest::Contains("non-integer label"),
                         std::runtime_error);
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(mcauc::load_dataset("does_not_exist.csv"), std::runtime_error);
}

TEST_CASE("min-max normalisation") {
  Dataset train;
  train.features = Matrix::from_rows({{2.0, 7.0, -1.0}, {4.0, 7.0, 1.0}, {3.0, 7.0, 0.0}});
  train.labels = {0, 1, 0};
  train.feature_names = {"f0", "f1", "f2"};
  train.class_names = {"class0", "class1"};

  const auto params = mcauc::fit_minmax(train);
  CHECK(params.min == std::vector<double>{2.0, 7.0, -1.0});
  CHECK(params.max == std::vector<double>{4.0, 7.0, 1.0});

  const Dataset normalised = mcauc::apply_minmax(params, train);
  CHECK(normalised.features(2, 0) == 0.5);       // value 3 in range [2, 4]
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(normalised.features(r, 1) == 0.0);     // constant feature
    CHECK(normalised.features(r, 0) >= 0.0);
    CHECK(normalised.features(r, 0) <= 1.0);
  }

  // Values outside the train range clamp to the unit interval.
  Dataset test = train;
  test.features(0, 0) = 1.0;   // below min
  test.features(1, 0) = 10.0;  // above max
  const Dataset mapped = mcauc::apply_minmax(params, test);
  CHECK(mapped.features(0, 0) == 0.0);
  CHECK(mapped.features(1, 0) == 1.0);

  // Normalisation is idempotent: refitting on normalised data is an identity.
  const auto refit = mcauc::fit_minmax(normalised);
  const Dataset twice = mcauc::apply_minmax(refit, normalised);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(std::abs(twice.features(r, c) - normalised.features(r, c)) <= 1e-12);
}

TEST_CASE("gen_synthetic validates its spec") {
  SyntheticSpec spec;
  spec.spread = 0.0;
  CHECK_THROWS_AS(mcauc::gen_synthetic(spec), std::invalid_argument);
  spec.spread = 1.0;
  spec.imbalance = {0.5, 0.5};
  CHECK_THROWS_AS(mcauc::gen_synthetic(spec), std::invalid_argument);
  spec.imbalance = {0.2, 0.3, 0.6};
  CHECK_THROWS_AS(mcauc::gen_synthetic(spec), std::invalid_argument);
}

}  // TEST_SUITE
