// Copyright 2026 The iscb Authors
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

#include "iscb/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>
#include <fmt/format.h>

#include "iscb/errors.hpp"
#include "iscb/io.hpp"
#include "iscb/iscb.hpp"
#include "iscb/svm.hpp"
#include "iscb/theory.hpp"

namespace iscb::experiment {

std::string format_double(double v) { return fmt::format("{:.6f}", v); }

std::vector<Seed> ExperimentConfig::seeds() const {
  std::vector<Seed> out;
  for (int t = 0; t < trials; ++t) out.push_back(seed_base + static_cast<Seed>(t));
  return out;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::configuration, what);
  };
  require(m >= 1, "m must be at least 1");
  require(levels >= 1 && levels <= kMaxLevels, "L must lie in 1..32");
  require(levels <= m, "L cannot exceed m");
  require(iterations >= 1, "K must be at least 1");
  require(trials >= 1, "need at least one trial");
  require(train_per_class >= 1 && test_per_class >= 1, "per-class counts must be positive");
}

std::vector<double> AccuracySeries::mean() const {
  std::vector<double> out;
  if (per_trial.empty()) return out;
  out.assign(per_trial.front().size(), 0.0);
  for (const auto& t : per_trial) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += t[k];
  }
  for (auto& v : out) v /= static_cast<double>(per_trial.size());
  return out;
}

const AccuracySeries& ExperimentReport::find(const std::string& label) const {
  for (const auto& s : series) {
    if (s.label == label) return s;
  }
  throw Error(ErrorKind::configuration, "no series named " + label);
}

std::string ExperimentReport::csv() const {
  std::string out = "series,trial,K,accuracy\n";
  for (const auto& s : series) {
    for (std::size_t t = 0; t < s.per_trial.size(); ++t) {
      for (std::size_t k = 0; k < s.per_trial[t].size(); ++k) {
        out += fmt::format("{},{},{},{}\n", s.label, t, k + 1, format_double(s.per_trial[t][k]));
      }
    }
  }
  for (const auto& s : series) {
    const auto mean = s.mean();
    for (std::size_t k = 0; k < mean.size(); ++k) {
      out += fmt::format("{},mean,{},{}\n", s.label, k + 1, format_double(mean[k]));
    }
  }
  return out;
}

std::string ExperimentReport::summary() const {
  std::string out = fmt::format("experiment: {}\n", name);
  for (const auto& [key, value] : notes) out += fmt::format("  {}: {}\n", key, value);
  for (const auto& s : series) {
    out += fmt::format("  {} mean accuracy by K:", s.label);
    const auto mean = s.mean();
    for (std::size_t k = 0; k < mean.size(); ++k) out += fmt::format(" K={} {}", k + 1, format_double(mean[k]));
    out += "\n";
  }
  return out;
}

std::vector<double> layer_accuracies(const std::vector<std::vector<ClassId>>& predictions,
                                     const std::vector<ClassId>& truth) {
  if (truth.empty()) throw Error(ErrorKind::empty_data, "no points to score");
  std::vector<double> out;
  for (const auto& layer : predictions) {
    if (layer.size() != truth.size()) throw Error(ErrorKind::consistency, "prediction count mismatch");
    std::size_t correct = 0;
    for (std::size_t j = 0; j < truth.size(); ++j) correct += layer[j] == truth[j];
    out.push_back(static_cast<double>(correct) / static_cast<double>(truth.size()));
  }
  return out;
}

namespace {

IscbOptions options_for(const ExperimentConfig& c, int classes, Seed seed, Variant variant) {
  IscbOptions o;
  o.classes = classes;
  o.iterations = c.iterations;
  o.shapes = {LayerShape{c.m, c.levels}};
  o.variant = variant;
  o.seed = seed;
  return o;
}

std::vector<double> fit_and_score(const ExperimentConfig& c, const Eigen::MatrixXd& train,
                                  const std::vector<ClassId>& train_labels, const Eigen::MatrixXd& test,
                                  const std::vector<ClassId>& test_labels, int classes, Seed seed,
                                  Variant variant) {
  const IscbModel model = train_on_data(train, train_labels, options_for(c, classes, seed, variant));
  return layer_accuracies(predict_layers(model, encode(model, test)), test_labels);
}

void add_common_notes(ExperimentReport& r, const ExperimentConfig& c) {
  r.notes.emplace_back("m", std::to_string(c.m));
  r.notes.emplace_back("L", std::to_string(c.levels));
  r.notes.emplace_back("K", std::to_string(c.iterations));
  r.notes.emplace_back("trials", std::to_string(c.trials));
  r.notes.emplace_back("seeds", fmt::format("{}..{}", c.seed_base, c.seed_base + static_cast<Seed>(c.trials) - 1));
}

io::ImageSet load_pool(const ExperimentConfig& c) {
  if (c.data_dir.empty()) throw Error(ErrorKind::io, "no MNIST directory configured");
  return io::load_mnist_pool(c.data_dir);
}

}  // namespace

ExperimentReport run_sandwich(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport r{"sandwich", {{"sandwich", {}}}, {}};
  add_common_notes(r, config);
  r.notes.emplace_back("points per split", fmt::format("{} blue, {} red", config.train_per_class,
                                                        2 * config.train_per_class));
  for (Seed s : config.seeds()) {
    const LabeledDataset d = gen_sandwich(config.train_per_class, 2 * config.train_per_class, s);
    r.series[0].per_trial.push_back(fit_and_score(config, d.points_of(Split::train), d.labels_of(Split::train),
                                                  d.points_of(Split::test), d.labels_of(Split::test), 2, s,
                                                  config.variant));
  }
  return r;
}

MnistSubset select_mnist(const Eigen::MatrixXd& images, const std::vector<ClassId>& labels,
                         int train_per_class, int test_per_class, Seed seed) {
  if (static_cast<std::size_t>(images.cols()) != labels.size()) {
    throw Error(ErrorKind::consistency, "image and label counts differ");
  }
  const int classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
  std::vector<Index> train_idx, test_idx;
  for (ClassId g = 1; g <= classes; ++g) {
    std::vector<Index> own;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] == g) own.push_back(static_cast<Index>(j));
    }
    const auto need = static_cast<std::size_t>(train_per_class + test_per_class);
    if (own.size() < need) {
      throw Error(ErrorKind::configuration, fmt::format("class {} has {} images, {} requested", g,
                                                        own.size(), need));
    }
    Engine rng = make_engine(seed, stream::subset, static_cast<std::uint64_t>(g));
    for (std::size_t k = own.size(); k > 1; --k) {
      boost::random::uniform_int_distribution<std::size_t> pick(0, k - 1);
      std::swap(own[k - 1], own[pick(rng)]);
    }
    train_idx.insert(train_idx.end(), own.begin(), own.begin() + train_per_class);
    test_idx.insert(test_idx.end(), own.begin() + train_per_class, own.begin() + static_cast<std::ptrdiff_t>(need));
  }
  MnistSubset out;
  out.train = images(Eigen::all, train_idx);
  out.test = images(Eigen::all, test_idx);
  for (Index j : train_idx) out.train_labels.push_back(labels[static_cast<std::size_t>(j)]);
  for (Index j : test_idx) out.test_labels.push_back(labels[static_cast<std::size_t>(j)]);
  return out;
}

ExperimentReport run_mnist(const ExperimentConfig& config) {
  config.validate();
  const io::ImageSet pool = load_pool(config);
  ExperimentReport r{"mnist", {{to_string(config.variant), {}}}, {}};
  add_common_notes(r, config);
  r.notes.emplace_back("per digit", fmt::format("{} train, {} test", config.train_per_class, config.test_per_class));
  r.notes.emplace_back("pool size", std::to_string(pool.images.cols()));
  for (Seed s : config.seeds()) {
    const MnistSubset sub = select_mnist(pool.images, pool.labels, config.train_per_class, config.test_per_class, s);
    r.series[0].per_trial.push_back(fit_and_score(config, sub.train, sub.train_labels, sub.test, sub.test_labels,
                                                  10, s, config.variant));
  }
  return r;
}

ExperimentReport run_rhat_vs_rtilde(const ExperimentConfig& config) {
  config.validate();
  const io::ImageSet pool = load_pool(config);
  ExperimentReport r{"rhat-vs-rtilde", {{"rtilde", {}}, {"rhat", {}}}, {}};
  add_common_notes(r, config);
  r.notes.emplace_back("per digit", fmt::format("{} train, {} test", config.train_per_class, config.test_per_class));
  for (Seed s : config.seeds()) {
    const MnistSubset sub = select_mnist(pool.images, pool.labels, config.train_per_class, config.test_per_class, s);
    r.series[0].per_trial.push_back(fit_and_score(config, sub.train, sub.train_labels, sub.test, sub.test_labels,
                                                  10, s, Variant::rtilde));
    r.series[1].per_trial.push_back(fit_and_score(config, sub.train, sub.train_labels, sub.test, sub.test_labels,
                                                  10, s, Variant::rhat));
  }
  return r;
}

ExperimentReport run_point_mass(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport r{"point-mass", {{"equal", {}}, {"two-to-one", {}}}, {}};
  add_common_notes(r, config);
  r.notes.emplace_back("separation angle", "pi/8");
  for (Seed s : config.seeds()) {
    const int c = config.train_per_class;
    for (std::size_t which = 0; which < 2; ++which) {
      const LabeledDataset d = gen_point_masses(which == 0 ? c : 2 * c, c, std::numbers::pi / 8, s);
      r.series[which].per_trial.push_back(fit_and_score(config, d.points_of(Split::train), d.labels_of(Split::train),
                                                        d.points_of(Split::test), d.labels_of(Split::test), 2, s,
                                                        config.variant));
    }
  }
  return r;
}

ExperimentReport run_symmetric(const ExperimentConfig& config) {
  config.validate();
  if (config.m % 2 != 0) throw Error(ErrorKind::configuration, "mirrored hyperplane pairs need an even m");
  ExperimentReport r{"symmetric", {{"symmetric", {}}}, {}};
  add_common_notes(r, config);
  r.notes.emplace_back("hyperplanes", "random normals paired with their mirror images across y = x");
  for (Seed s : config.seeds()) {
    const LabeledDataset d = gen_symmetric(config.train_per_class, std::numbers::pi / 8, s);
    const MeasurementMatrix half = gaussian_matrix(config.m / 2, 2, derive_seed(s, stream::input_measurement, 0));
    Eigen::MatrixXd normals(config.m, 2);
    for (Index i = 0; i < half.rows(); ++i) {
      normals.row(2 * i) = half.normals().row(i);
      normals.row(2 * i + 1) << half.normals()(i, 1), half.normals()(i, 0);
    }
    const SignMatrix q = binarize(MeasurementMatrix(std::move(normals)), d.points);
    const IscbModel model = train_iterative(q, d.labels, options_for(config, 2, s, config.variant));
    r.series[0].per_trial.push_back(layer_accuracies(predict_layers(model, q), d.labels));
  }
  return r;
}

std::vector<BoundRow> run_bounds(const std::vector<int>& ks, const std::vector<int>& js,
                                 const std::vector<double>& thresholds, std::size_t draws, Seed seed) {
  std::vector<BoundRow> rows;
  std::uint64_t cell = 0;
  for (int k : ks) {
    for (int j : js) {
      const theory::WedgeConfig cfg{k, k, j, 1.0, 1.0, 1.0};
      const auto sim = theory::simulate_wedges(cfg, thresholds, draws, derive_seed(seed, stream::wedge, cell++));
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        BoundRow row;
        row.k = k;
        row.j = j;
        row.a = thresholds[t];
        row.bound_raw = theory::angle_bound_raw(cfg, row.a);
        row.bound = std::min(1.0, row.bound_raw);
        row.empirical = sim.probability[t];
        row.empirical_se = sim.probability_error[t];
        row.mean_angle = sim.mean_angle;
        row.dominated = row.bound_raw >= row.empirical - 3.0 * row.empirical_se;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string bounds_csv(const std::vector<BoundRow>& rows) {
  std::string out = "k,j,a,bound,bound_raw,empirical,empirical_se,mean_angle,dominated\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.k, r.j, format_double(r.a), format_double(r.bound),
                       format_double(r.bound_raw), format_double(r.empirical), format_double(r.empirical_se),
                       format_double(r.mean_angle), r.dominated ? 1 : 0);
  }
  return out;
}

std::vector<MomentRow> run_moments(std::size_t draws, Seed seed) {
  static const char* kNames[] = {"u(1-u)/(1+u)^2", "(1-u)/(1+u)^2", "u^2(1-u)^2/(1+u)^4", "(1-u)^2/(1+u)^4"};
  const auto closed = theory::cut_moments();
  const auto quad = theory::cut_moments_quadrature();
  const auto mc = theory::cut_moments_monte_carlo(draws, seed);
  std::vector<MomentRow> rows;
  for (std::size_t w = 0; w < 4; ++w) {
    rows.push_back({kNames[w], closed[w], quad[w], mc[w].mean, mc[w].standard_error});
  }
  return rows;
}

std::string moments_csv(const std::vector<MomentRow>& rows) {
  std::string out = "integrand,closed_form,quadrature,monte_carlo,monte_carlo_se\n";
  for (const auto& r : rows) {
    out += fmt::format("\"{}\",{:.12f},{:.12f},{:.12f},{:.12f}\n", r.integrand, r.closed_form, r.quadrature,
                       r.monte_carlo, r.monte_carlo_se);
  }
  return out;
}

std::vector<SeparationRow> run_separation(const std::vector<double>& ratios, int steps) {
  if (steps < 1) throw Error(ErrorKind::configuration, "need at least one step");
  std::vector<SeparationRow> rows;
  for (double c : ratios) {
    for (int i = 1; i <= steps; ++i) {
      const double f = static_cast<double>(i) / steps;
      rows.push_back({c, f, theory::second_iteration_separation(f, c)});
    }
  }
  return rows;
}

std::string separation_csv(const std::vector<SeparationRow>& rows) {
  std::string out = "mass_ratio,separating_fraction,angle\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{}\n", format_double(r.mass_ratio), format_double(r.fraction), format_double(r.angle));
  }
  return out;
}

PreprocessTrial PreprocessReport::mean() const {
  PreprocessTrial m;
  for (const auto& t : trials) {
    m.raw_train += t.raw_train;
    m.raw_test += t.raw_test;
    m.scb_train += t.scb_train;
    m.scb_test += t.scb_test;
    m.feature_train += t.feature_train;
    m.feature_test += t.feature_test;
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, trials.size()));
  m.raw_train /= n;
  m.raw_test /= n;
  m.scb_train /= n;
  m.scb_test /= n;
  m.feature_train /= n;
  m.feature_test /= n;
  return m;
}

std::string PreprocessReport::csv() const {
  std::string out = "trial,L,m,raw_train,raw_test,scb_train,scb_test,feature_train,feature_test\n";
  auto row = [&](const std::string& name, const PreprocessTrial& t) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", name, levels, m, format_double(t.raw_train),
                       format_double(t.raw_test), format_double(t.scb_train), format_double(t.scb_test),
                       format_double(t.feature_train), format_double(t.feature_test));
  };
  for (std::size_t t = 0; t < trials.size(); ++t) row(std::to_string(t), trials[t]);
  row("mean", mean());
  return out;
}

std::string PreprocessReport::summary() const {
  const auto mu = mean();
  return fmt::format(
      "preprocess on arcs (L={}, m={}, {} trials)\n"
      "  linear SVM on raw points:   train {} test {}\n"
      "  SCB argmax:                 train {} test {}\n"
      "  linear SVM on r~ features:  train {} test {}\n"
      "  trials with perfect SCB training accuracy: {}; separability carried over: {}\n",
      levels, m, trials.size(), format_double(mu.raw_train), format_double(mu.raw_test),
      format_double(mu.scb_train), format_double(mu.scb_test), format_double(mu.feature_train),
      format_double(mu.feature_test), perfect_scb_trials, separability_transfer ? "yes" : "no");
}

namespace {

std::vector<int> plus_minus(const std::vector<ClassId>& labels) {
  std::vector<int> y;
  for (ClassId b : labels) y.push_back(b == 1 ? 1 : -1);
  return y;
}

double argmax_accuracy(const Eigen::MatrixXd& scores, const std::vector<ClassId>& labels) {
  std::size_t correct = 0;
  for (Index j = 0; j < scores.cols(); ++j) {
    const Eigen::VectorXd col = scores.col(j);
    correct += argmax_class(std::span<const double>(col.data(), static_cast<std::size_t>(col.size()))) ==
               labels[static_cast<std::size_t>(j)];
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

}  // namespace

PreprocessReport run_preprocess(const PreprocessConfig& config) {
  if (config.trials < 1 || config.points_per_class < 2 || config.m < config.levels || config.levels < 1) {
    throw Error(ErrorKind::configuration, "invalid preprocessing configuration");
  }
  PreprocessReport report;
  report.levels = config.levels;
  report.m = config.m;
  for (int t = 0; t < config.trials; ++t) {
    const Seed s = config.seed_base + static_cast<Seed>(t);
    const LabeledDataset d = gen_arcs(config.points_per_class, s);
    const Eigen::MatrixXd xtr = d.points_of(Split::train);
    const Eigen::MatrixXd xte = d.points_of(Split::test);
    const auto btr = d.labels_of(Split::train);
    const auto bte = d.labels_of(Split::test);
    const auto ytr = plus_minus(btr);
    const auto yte = plus_minus(bte);
    const LinearOptions svm{config.lambda, config.epochs, s};

    PreprocessTrial trial;
    const LinearModel raw = train_linear(xtr, ytr, svm);
    trial.raw_train = accuracy(raw, xtr, ytr);
    trial.raw_test = accuracy(raw, xte, yte);

    IscbOptions opts;
    opts.classes = 2;
    opts.iterations = 1;
    opts.shapes = {LayerShape{config.m, config.levels}};
    opts.seed = s;
    const IscbModel model = train_on_data(xtr, btr, opts, InputOptions{true, {}, {}});
    const Eigen::MatrixXd ftr = score_columns(model.layer(1), encode(model, xtr), Variant::rtilde);
    const Eigen::MatrixXd fte = score_columns(model.layer(1), encode(model, xte), Variant::rtilde);
    trial.scb_train = argmax_accuracy(ftr, btr);
    trial.scb_test = argmax_accuracy(fte, bte);

    const LinearModel feat = train_linear(ftr, ytr, svm);
    trial.feature_train = accuracy(feat, ftr, ytr);
    trial.feature_test = accuracy(feat, fte, yte);

    if (trial.scb_train == 1.0) {
      ++report.perfect_scb_trials;
      report.separability_transfer = report.separability_transfer && trial.feature_train == 1.0;
    }
    if (t == 0 && !config.feature_dir.empty()) {
      LabeledDataset f;
      f.points.resize(2, d.size());
      f.points << ftr, fte;
      f.labels = btr;
      f.labels.insert(f.labels.end(), bte.begin(), bte.end());
      f.split.assign(btr.size(), Split::train);
      f.split.insert(f.split.end(), bte.size(), Split::test);
      f.generator = "rtilde_features_of_arcs";
      f.params = {{"L", config.levels}, {"m", config.m}};
      f.seed = s;
      std::filesystem::create_directories(config.feature_dir);
      io::write_dataset_csv(config.feature_dir / fmt::format("arc_features_L{}_m{}.csv", config.levels, config.m), f);
    }
    report.trials.push_back(trial);
  }
  return report;
}

}  // namespace iscb::experiment
