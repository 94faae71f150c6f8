// Runs the fairpost executable end to end in a scratch directory.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("fairpost_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    ASSERT_EQ(run("generate --model M1 --n 2000 --seed 1 --out " + path("m1.csv")).code, 0);
    ASSERT_EQ(run("train --data " + path("m1.csv") + " --n-estimators 60 --out " + path("gbm.json"))
                  .code,
              0);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string path(const std::string& name) { return (dir_ / name).string(); }

  static Outcome run(const std::string& args, const std::string& env = "") {
    const auto err = path("stderr.txt");
    const std::string cmd = env + " " FAIRPOST_CLI " " + args + " 2>" + err + " >/dev/null";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::vector<std::string> lines(const std::string& p) {
    std::vector<std::string> out;
    std::ifstream in(p);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }

  static nlohmann::json json_at(const std::string& p) { return nlohmann::json::parse(slurp(p)); }

  static std::string data_model() { return "--data " + path("m1.csv") + " --model " + path("gbm.json"); }

  static fs::path dir_;
};

fs::path Cli::dir_;

TEST_F(Cli, GenerateWritesHeaderRowsAndManifest) {
  const auto l = lines(path("m1.csv"));
  ASSERT_EQ(l.size(), 2001u);
  EXPECT_EQ(l[0], "x1,x2,x3,x4,x5,g,y");
  const auto m = json_at(path("m1.csv.manifest.json"));
  EXPECT_EQ(m["command"], "generate");
  EXPECT_EQ(m["settings"]["n"], 2000);

  ASSERT_EQ(run("generate --model M4 --n 50 --seed 2 --out " + path("m4.csv")).code, 0);
  EXPECT_EQ(lines(path("m4.csv"))[0], "x1,x2,x3,x4,x5,g,y");
}

TEST_F(Cli, InvalidModelIdIsAValidationError) {
  const auto r = run("generate --model M7 --n 10 --out " + path("bad.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("M7"), std::string::npos);
}

TEST_F(Cli, BiasPartitions) {
  ASSERT_EQ(run("bias " + data_model() + " --sign -1 --out " + path("sp.json")).code, 0);
  const auto sp = json_at(path("sp.json"));
  EXPECT_EQ(sp["cells"].size(), 1u);
  EXPECT_GT(sp["total"].get<double>(), 0.0);

  ASSERT_EQ(run("bias " + data_model() + " --sign -1 --partition eo --out " + path("eo.json")).code, 0);
  const auto eo = json_at(path("eo.json"));
  ASSERT_EQ(eo["cells"].size(), 2u);
  EXPECT_DOUBLE_EQ(eo["cells"][0]["weight"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(eo["cells"][1]["weight"].get<double>(), 0.5);
  const double w = 0.5 * eo["cells"][0]["total"].get<double>() + 0.5 * eo["cells"][1]["total"].get<double>();
  EXPECT_NEAR(eo["total"].get<double>(), w, 1e-15);
  EXPECT_TRUE(fs::exists(path("eo.json.manifest.json")));
}

TEST_F(Cli, MissingClassInCellNamesTheCell) {
  // Every Y=1 row is in G=0.
  std::ofstream out(path("skewed.csv"));
  out << "x1,x2,x3,x4,x5,g,y\n";
  for (int r = 0; r < 40; ++r)
    out << r * 0.1 << ",5,5,5,5," << (r % 2 == 0 ? 0 : (r < 20 ? 1 : 0)) << ',' << (r >= 20) << '\n';
  out.close();
  const auto r = run("bias --data " + path("skewed.csv") + " --model " + path("gbm.json") +
                     " --partition eo --out " + path("skewed.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("y=1"), std::string::npos) << r.err;
}

TEST_F(Cli, ExplainMethodsShareSchemaAndRankX3First) {
  for (const std::string m : {"pdp", "shapley", "ibe"}) {
    const auto out = path("explain_" + m + ".csv");
    ASSERT_EQ(run("explain " + data_model() + " --sign -1 --method " + m +
                  " --max-rows 600 --background 200 --anchors 100 --out " + out)
                  .code,
              0)
        << m;
    const auto l = lines(out);
    ASSERT_EQ(l.size(), 6u);
    EXPECT_EQ(l[0], "predictor,kind,beta,beta_pos,beta_neg,net,bpp,bpm,bmp,bmm");
    std::string top;
    double best = -1.0;
    for (std::size_t k = 1; k < l.size(); ++k) {
      std::stringstream ss(l[k]);
      std::string name, kind, beta;
      std::getline(ss, name, ',');
      std::getline(ss, kind, ',');
      std::getline(ss, beta, ',');
      if (std::stod(beta) > best) best = std::stod(beta), top = name;
    }
    EXPECT_EQ(top, "x3") << m;
    EXPECT_TRUE(json_at(out + ".manifest.json").contains("impact"));
  }
}

TEST_F(Cli, EmptyImpactListWarns) {
  std::ofstream(path("flat.json")) << R"({"kind":"logistic","coef":[0,0,0,0,0,0],"names":["x1","x2","x3","x4","x5"]})";
  const auto r = run("explain --data " + path("m1.csv") + " --model " + path("flat.json") +
                     " --method pdp --background 50 --out " + path("flat.csv"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("M is empty"), std::string::npos) << r.err;
}

TEST_F(Cli, MitigateIsReproducibleFromItsManifest) {
  const auto out = path("frontier.csv");
  ASSERT_EQ(run("mitigate " + data_model() + " --sign -1 --predictors x1,x2,x3,x5 --n-prior 20 "
                "--n-bo 4 --omegas 0,1,2 --seed 5 --out " + out)
                .code,
            0);
  const auto first = slurp(out);
  EXPECT_EQ(lines(out)[0], "omega,bias,loss,dominated_flag,gamma_json");
  ASSERT_EQ(run("replay " + out + ".manifest.json").code, 0);
  EXPECT_EQ(slurp(out), first);
  ASSERT_EQ(run("replay " + out + ".manifest.json", "FAIRPOST_THREADS=3").code, 0);
  EXPECT_EQ(slurp(out), first);
}

TEST_F(Cli, MitigateWithoutBoIsThePriorSample) {
  const auto out = path("prior_only.csv");
  ASSERT_EQ(run("mitigate " + data_model() + " --sign -1 --predictors x1,x3 --n-prior 15 --n-bo 0 "
                "--omegas 0,0.5 --out " + out)
                .code,
            0);
  const auto l = lines(out);
  ASSERT_EQ(l.size(), 16u);
  for (std::size_t k = 1; k < l.size(); ++k) EXPECT_EQ(l[k].substr(0, 4), "nan,") << l[k];
}

TEST_F(Cli, MitigateAcceptsDefaultSettings) {
  ASSERT_EQ(run("generate --model M1 --n 600 --seed 9 --out " + path("small.csv")).code, 0);
  const auto out = path("defaults.csv");
  ASSERT_EQ(run("mitigate --data " + path("small.csv") + " --model " + path("gbm.json") +
                " --sign -1 --predictors x1,x2,x3,x5 --out " + out)
                .code,
            0);
  const auto m = json_at(out + ".manifest.json")["run"];
  EXPECT_EQ(m["settings"]["n_prior"], 400);
  EXPECT_EQ(m["settings"]["n_bo"], 50);
  ASSERT_EQ(m["settings"]["omegas"].size(), 21u);
  EXPECT_DOUBLE_EQ(m["settings"]["omegas"][20].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(m["transforms"][0]["a"][0].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(m["transforms"][0]["a"][1].get<double>(), 2.0);
}

TEST_F(Cli, CurveColumnsAndGrid) {
  const auto out = path("curve.csv");
  ASSERT_EQ(run("curve " + data_model() + " --sign -1 --predictors x1,x3 --a-grid 1:15 --out " + out).code, 0);
  const auto l = lines(out);
  ASSERT_EQ(l.size(), 16u);
  EXPECT_EQ(l[0], "a,total,positive,negative");
  EXPECT_EQ(l[1].substr(0, 2), "1,");
  EXPECT_EQ(l[15].substr(0, 3), "15,");

  ASSERT_EQ(run("curve " + data_model() + " --predictors x1 --a-grid 3 --out " + path("one.csv")).code, 0);
  EXPECT_EQ(lines(path("one.csv")).size(), 2u);

  const auto r = run("curve " + data_model() + " --predictors x1,x42 --out " + path("nope.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("x42"), std::string::npos);
}

TEST_F(Cli, CalibrateMethodsAndNumericalFailure) {
  const std::string gamma =
      R"('{"transforms":[{"index":2,"predictor":"x3","kind":"global","a":2.0,"focal":5.0,"focal_rule":"fixed"}]}')";
  for (const std::string m : {"link_linear", "pava", "logistic_refit"}) {
    const auto out = path("cal_" + m + ".json");
    ASSERT_EQ(run("calibrate " + data_model() + " --method " + m + " --gamma " + gamma + " --out " + out).code, 0) << m;
    EXPECT_EQ(json_at(out)["calibration"]["kind"], m);
  }
  // Compressing everything to a point leaves nothing to regress on.
  std::string all = R"('{"transforms":[)";
  for (int i = 0; i < 5; ++i)
    all += std::string(i ? "," : "") + R"({"index":)" + std::to_string(i) + R"(,"predictor":"x)" +
           std::to_string(i + 1) + R"(","kind":"global","a":1e12,"focal":5.0,"focal_rule":"fixed"})";
  all += "]}'";
  EXPECT_EQ(run("calibrate " + data_model() + " --gamma " + all + " --out " + path("cal_flat.json")).code, 3);
}

TEST_F(Cli, BaselineDegenerateBoxGivesOnePoint) {
  const auto out = path("baseline.csv");
  ASSERT_EQ(run("compare-baseline --data " + path("m1.csv") + " --sign -1 --n-prior 3 --n-bo 1 "
                "--omegas 0,1 --n-estimators-lo 30 --n-estimators-hi 30 --max-leaves-lo 4 "
                "--max-leaves-hi 4 --max-depth-lo 2 --max-depth-hi 2 --learning-rate-lo 0.1 "
                "--learning-rate-hi 0.1 --best-model-out " + path("best.json") + " --out " + out)
                .code,
            0);
  int on_frontier = 0;
  for (const auto& l : lines(out)) on_frontier += l.find(",0,\"") != std::string::npos;
  EXPECT_EQ(on_frontier, 1);
  EXPECT_EQ(json_at(path("best.json"))["kind"], "gbm");
}

TEST_F(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run("bias --data " + path("m1.csv") + " --out " + path("x.json")).code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

}  // namespace
