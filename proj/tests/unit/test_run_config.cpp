#include "qfm/errors.hpp"
#include "qfm/run_config.hpp"
#include "qfm/selfcheck.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qfm;

TEST(RunConfig, DefaultsAreValid) {
    const RunConfig c;
    EXPECT_NO_THROW(c.validate());
    const auto b = c.benchmark_config();
    EXPECT_EQ(b.models.size(), 6u);
    EXPECT_EQ(b.seeds, (std::vector<std::uint64_t>{0, 1, 2, 3, 4}));
    EXPECT_EQ(b.pca_components, 16);
    EXPECT_EQ(b.split, SplitSpec::full_scale());
    EXPECT_EQ(c.sweep_config().base.pca_components, 32);
}

TEST(RunConfig, InvalidFieldsAreConfigErrors) {
    RunConfig c;
    c.models = {"svm-quantum"};
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.batch_size = 33;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.desk_scale = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.workers = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.seeds.clear();
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.synth.num_classes = 1;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(RunConfig, DeskScaleAndBatchSizeFlowThrough) {
    RunConfig c;
    c.desk_scale = 0.1;
    c.batch_size = 32;
    c.pca_components = 32;
    const auto b = c.benchmark_config();
    EXPECT_EQ(b.split.train_per_class, 140);
    EXPECT_EQ(b.vqc.batch_size, 32);
    EXPECT_EQ(b.mlp.batch_size, 32);
    EXPECT_EQ(b.pca_components, 32);
}

TEST(Selfcheck, PassesAndDetectsCorruptedGradient) {
    const auto ok = run_selfcheck();
    EXPECT_TRUE(all_passed(ok));
    EXPECT_EQ(ok.size(), 5u);
    const auto bad = run_selfcheck({.corrupt_gradient = true});
    EXPECT_FALSE(all_passed(bad));
    for (const auto& r : bad) {
        EXPECT_EQ(r.passed, r.name != "gradient vs finite differences") << r.name;
    }
    std::ostringstream out;
    print_selfcheck(out, bad);
    EXPECT_NE(out.str().find("FAIL  gradient vs finite differences"), std::string::npos);
}
