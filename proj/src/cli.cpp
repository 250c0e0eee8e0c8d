/*
 * Copyright 2026 The infopursuit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ip/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ip/rng.hpp"
#include "ip/trace_io.hpp"

namespace ip::cli {

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s[0] == '-') throw UsageError("bad " + what + ": '" + s + "'");
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw UsageError("bad " + what + ": '" + s + "'");
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json label_names(const LabelSpace& labels) {
  json out = json::array();
  for (std::size_t y = 0; y < labels.size(); ++y) out.push_back(labels.name(static_cast<LabelIndex>(y)));
  return out;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty())
    out << text;
  else
    io::write_text_file(cfg.out, text);
}

// ---------------------------------------------------------------------------

struct Workspace {
  Dataset train;
  Dataset test;
  std::optional<QuerySet> qset;
  std::unique_ptr<GenerativeModel> model;
  std::vector<std::vector<double>> fit_log;  // per class, when fitted here
};

std::pair<std::string, std::string> idx_paths(const std::string& spec) {
  const auto parts = split_on(spec, ',');
  if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
    throw UsageError("IDX datasets are given as 'images,labels': '" + spec + "'");
  return {parts[0], parts[1]};
}

void load_data(const RunConfig& cfg, Workspace& ws) {
  Dataset full;
  std::optional<Dataset> test;
  if (cfg.format == "idx") {
    const auto [img, lab] = idx_paths(cfg.dataset);
    full = load_idx_images(img, lab, cfg.threshold);
    const auto& im = std::get<BinaryImage>(full.items.front().instance.raw);
    if (cfg.queryset.param > std::min(im.height, im.width)) throw UsageError("patch side exceeds the image size");
    ws.qset = QuerySet::patches(im.height, im.width, static_cast<std::uint32_t>(cfg.queryset.param));
    if (!cfg.test_dataset.empty()) {
      const auto [ti, tl] = idx_paths(cfg.test_dataset);
      test = load_idx_images(ti, tl, cfg.threshold);
    }
  } else if (cfg.format == "csv") {
    full = load_attribute_csv(cfg.dataset);
    ws.qset = QuerySet::attributes(full.attribute_names);
    if (!cfg.test_dataset.empty()) {
      test = load_attribute_csv(cfg.test_dataset);
      if (test->attribute_names != full.attribute_names) throw DataError("test CSV has different attribute columns");
    }
  } else {
    CategoryMap map;
    TextOptions topts;
    if (!cfg.category_map.empty()) {
      map = load_category_map(cfg.category_map);
      topts.category_map = &map;
    }
    auto corpus = load_text_jsonl(cfg.dataset, cfg.queryset.param, topts);
    full = std::move(corpus.dataset);
    ws.qset = std::move(corpus.queryset);
    if (!cfg.test_dataset.empty()) {
      topts.labels = &full.labels;
      test = load_text_jsonl(cfg.test_dataset, *ws.qset, topts).dataset;
    }
  }
  if (test) {
    ws.train = std::move(full);
    ws.test = relabel(*test, ws.train.labels);
  } else {
    auto [tr, te] = split(full, cfg.train_fraction, cfg.seed);
    ws.train = std::move(tr);
    ws.test = std::move(te);
  }
  ws.train = head(ws.train, cfg.limit_train);
  ws.test = head(ws.test, cfg.limit_test);
  ws.train.validate();
}

void build_model(const RunConfig& cfg, Workspace& ws) {
  switch (cfg.model.kind) {
    case ModelSpec::Kind::tabular:
      ws.model = std::make_unique<TabularJointModel>(ws.train, *ws.qset, cfg.alpha);
      break;
    case ModelSpec::Kind::mixture:
      if (!cfg.model_file.empty()) {
        ws.model = io::load_model(cfg.model_file);
        if (!dynamic_cast<const BernoulliMixtureModel*>(ws.model.get()))
          throw DataError(cfg.model_file + " is not a mixture model file");
      } else {
        EmOptions em;
        em.components = cfg.model.components;
        em.max_iters = cfg.em_iters;
        em.tol = cfg.em_tol;
        em.seed = cfg.seed;
        auto fit = em_fit(ws.train, *ws.qset, em);
        ws.fit_log = std::move(fit.log_likelihood);
        ws.model = std::make_unique<BernoulliMixtureModel>(std::move(fit.model));
      }
      break;
    case ModelSpec::Kind::latent:
      ws.model = io::load_model(cfg.model.decoder_path);
      if (!dynamic_cast<const LatentGaussianModel*>(ws.model.get()))
        throw DataError(cfg.model.decoder_path + " is not a decoder file");
      break;
  }
  if (!(ws.model->labels() == ws.train.labels)) throw DataError("model labels differ from the dataset labels");
  try {
    ws.model->check_compatible(*ws.qset);
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model does not fit the query set: ") + e.what());
  }
}

PursuitOptions pursuit_options(const RunConfig& cfg) {
  PursuitOptions po;
  po.inference.sampler = cfg.sampler;
  po.inference.sampler.seed = rng::derive(cfg.seed, "ula");
  po.inference.mode = ExecutionMode::parallel;
  return po;
}

std::vector<ExplanationTrace> pursue_all(const RunConfig& cfg, const Workspace& ws, const TerminationConfig& term) {
  auto po = pursuit_options(cfg);
  const auto first = first_step_scores(*ws.model, *ws.qset, po.inference);
  po.first_scores = &first;
  return run_ip_batch(*ws.model, *ws.qset, ws.test.items, term, po, cfg.workers);
}

std::string summary_line(const TraceSummary& s) {
  std::ostringstream o;
  o << "instances=" << s.count << " mean_length=" << fmt(s.mean_length) << " accuracy=" << fmt(s.accuracy)
    << " mean_revealed=" << fmt(s.mean_revealed);
  for (int r = 0; r < 4; ++r) o << " " << to_string(static_cast<StopReason>(r)) << "=" << s.stops[r];
  return o.str();
}

json config_with_labels(const RunConfig& cfg, const LabelSpace& labels) {
  json c = cfg.echo();
  c["labels"] = label_names(labels);
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------

QuerySetSpec parse_queryset(const std::string& text) {
  const auto p = split_on(text, ':');
  QuerySetSpec s;
  if (p[0] == "patch" && p.size() == 2) {
    s.kind = QueryKind::patch;
    s.param = parse_count(p[1], "patch side");
    if (s.param < 1) throw UsageError("patch side must be at least 1");
  } else if (p[0] == "attr" && p.size() == 1) {
    s.kind = QueryKind::attribute;
    s.param = 0;
  } else if (p[0] == "word" && p.size() == 2) {
    s.kind = QueryKind::word;
    s.param = parse_count(p[1], "vocabulary size");
    if (s.param < 1) throw UsageError("vocabulary size must be at least 1");
  } else {
    throw UsageError("--queryset must be patch:w, attr or word:n, got '" + text + "'");
  }
  return s;
}

ModelSpec parse_model(const std::string& text) {
  ModelSpec m;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "tabular" && colon == std::string::npos) {
    m.kind = ModelSpec::Kind::tabular;
  } else if (head == "mixture" && colon != std::string::npos) {
    m.kind = ModelSpec::Kind::mixture;
    m.components = parse_count(rest, "component count");
    if (m.components < 1) throw UsageError("component count must be at least 1");
  } else if (head == "latent" && !rest.empty()) {
    m.kind = ModelSpec::Kind::latent;
    m.decoder_path = rest;
  } else {
    throw UsageError("--model must be tabular, mixture:K or latent:path, got '" + text + "'");
  }
  return m;
}

TerminationConfig parse_term(const std::string& text) {
  const auto p = split_on(text, ':');
  if (p.size() != 3 || (p[0] != "conf" && p[0] != "mi"))
    throw UsageError("--term must be conf:eps:T or mi:eps:T, got '" + text + "'");
  TerminationConfig t;
  t.kind = p[0] == "conf" ? TerminationKind::confidence : TerminationKind::mutual_information;
  t.epsilon = parse_real(p[1], "epsilon");
  t.window = parse_count(p[2], "window");
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return t;
}

void RunConfig::finalize() {
  queryset = parse_queryset(queryset_text);
  model = parse_model(model_text);
  const std::size_t max_q = term.max_queries;
  term = parse_term(term_text);
  term.max_queries = max_q;
  if (subcommand == "verify") return;
  if (dataset.empty()) throw UsageError("--dataset is required");
  if (format != "idx" && format != "csv" && format != "jsonl") throw UsageError("--format must be idx, csv or jsonl");
  const bool fits = (format == "idx" && queryset.kind == QueryKind::patch) ||
                    (format == "csv" && queryset.kind == QueryKind::attribute) ||
                    (format == "jsonl" && queryset.kind == QueryKind::word);
  if (!fits) throw UsageError("--queryset " + queryset_text + " does not match --format " + format);
  if (!(threshold > 0.0 && threshold < 1.0)) throw UsageError("--threshold must lie strictly inside (0, 1)");
  if (!(train_fraction > 0.0 && train_fraction < 1.0) && test_dataset.empty())
    throw UsageError("--train-fraction must lie strictly inside (0, 1)");
  if (!category_map.empty() && format != "jsonl") throw UsageError("--category-map applies to jsonl corpora only");
  if (subcommand == "fit") {
    if (model.kind != ModelSpec::Kind::mixture) throw UsageError("fit trains mixture models only");
    if (!model_file.empty()) throw UsageError("fit writes a model; --model-file is for the other subcommands");
    if (out.empty()) throw UsageError("fit needs --out for the model file");
  }
  if (!model_file.empty() && model.kind != ModelSpec::Kind::mixture)
    throw UsageError("--model-file goes with --model mixture:K");
  if (subcommand == "curve") {
    if (eps.size() < 2) throw UsageError("curve needs at least two --eps values");
    for (double e : eps)
      if (!(e >= 0.0)) throw UsageError("--eps values must be nonnegative");
  }
  if (em_iters < 1) throw UsageError("--em-iters must be at least 1");
  if (!(alpha >= 0.0)) throw UsageError("--alpha must be nonnegative");
  try {
    sampler.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

json RunConfig::echo() const {
  json c;
  c["subcommand"] = subcommand;
  c["seed"] = seed;
  if (subcommand == "verify") {
    c["priors"] = verify_priors;
    c["corrupt_huffman"] = corrupt_huffman;
    return c;
  }
  c["dataset"] = dataset;
  c["test_dataset"] = test_dataset;
  c["format"] = format;
  c["threshold"] = threshold;
  c["train_fraction"] = train_fraction;
  c["limit_train"] = limit_train;
  c["limit_test"] = limit_test;
  c["category_map"] = category_map;
  c["queryset"] = queryset_text;
  c["model"] = model_text;
  c["model_file"] = model_file;
  c["em_iters"] = em_iters;
  c["em_tol"] = em_tol;
  c["alpha"] = alpha;
  c["term"] = term_text;
  c["max_queries"] = term.max_queries;
  c["eps"] = eps;
  c["cart_depth"] = cart_depth;
  c["cart_min_leaf"] = cart_min_leaf;
  c["sampler"] = {{"step", sampler.step_size},   {"burnin", sampler.burn_in}, {"samples", sampler.n_samples},
                  {"chains", sampler.chains},    {"thinning", sampler.thinning}};
  return c;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Information Pursuit: explainable prediction by asking informative queries", "ip"};
  app.require_subcommand(1, 1);
  auto add_common = [&](CLI::App* s) {
    s->add_option("--seed", cfg.seed, "Top-level random seed");
    s->add_option("--out", cfg.out, "Output file (stdout when omitted)");
    s->add_option("--workers", cfg.workers, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  };
  auto add_data = [&](CLI::App* s) {
    s->add_option("--dataset", cfg.dataset, "Dataset: 'images,labels' for idx, else a file");
    s->add_option("--test-dataset", cfg.test_dataset, "Held-out dataset (otherwise a stratified split)");
    s->add_option("--format", cfg.format, "idx, csv or jsonl");
    s->add_option("--threshold", cfg.threshold, "Binarization threshold in (0, 1)");
    s->add_option("--train-fraction", cfg.train_fraction, "Training share of the stratified split");
    s->add_option("--limit-train", cfg.limit_train, "Keep the first N training instances (0 = all)");
    s->add_option("--limit-test", cfg.limit_test, "Keep the first N test instances (0 = all)");
    s->add_option("--category-map", cfg.category_map, "Label merge/drop file for jsonl corpora");
    s->add_option("--queryset", cfg.queryset_text, "patch:w, attr or word:n");
    s->add_option("--model", cfg.model_text, "tabular, mixture:K or latent:path");
    s->add_option("--model-file", cfg.model_file, "Mixture model written by 'fit'");
    s->add_option("--em-iters", cfg.em_iters, "EM iteration cap");
    s->add_option("--em-tol", cfg.em_tol, "EM relative log-likelihood tolerance");
    s->add_option("--alpha", cfg.alpha, "Tabular smoothing");
    s->add_option("--term", cfg.term_text, "conf:eps:T or mi:eps:T");
    s->add_option("--max-queries", cfg.term.max_queries, "Query budget (0 = |Q|)");
    s->add_option("--samples", cfg.sampler.n_samples, "Retained Langevin samples per label");
    s->add_option("--step", cfg.sampler.step_size, "Langevin step size");
    s->add_option("--burnin", cfg.sampler.burn_in, "Langevin burn-in iterations");
    s->add_option("--chains", cfg.sampler.chains, "Langevin chains");
    s->add_option("--thinning", cfg.sampler.thinning, "Keep every n-th Langevin state");
  };
  auto* fit = app.add_subcommand("fit", "Fit a Bernoulli mixture by EM and write the model file");
  auto* pursue = app.add_subcommand("pursue", "Run IP on every test instance and write the traces");
  auto* curve = app.add_subcommand("curve", "Accuracy and mean explanation length per epsilon");
  auto* compare = app.add_subcommand("compare", "IP versus CART versus MAP using all queries");
  auto* verify = app.add_subcommand("verify", "Run the theory verification suite");
  for (auto* s : {fit, pursue, curve, compare}) {
    add_common(s);
    add_data(s);
  }
  curve->add_option("--eps", cfg.eps, "Thresholds to sweep")->delimiter(',');
  compare->add_option("--cart-depth", cfg.cart_depth, "CART depth limit (0 = none)");
  compare->add_option("--cart-min-leaf", cfg.cart_min_leaf, "CART minimum instances per child");
  add_common(verify);
  verify->add_option("--priors", cfg.verify_priors, "Random priors for the bound checks");
  verify->add_flag("--corrupt-huffman", cfg.corrupt_huffman, "Test hook: corrupt one Huffman merge");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto* s : {fit, pursue, curve, compare, verify})
    if (s->parsed()) cfg.subcommand = s->get_name();
  cfg.finalize();
  return cfg;
}

// ---------------------------------------------------------------------------

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  Workspace ws;
  load_data(cfg, ws);
  build_model(cfg, ws);
  const auto& m = dynamic_cast<const BernoulliMixtureModel&>(*ws.model);
  io::save_model(cfg.out, m, cfg.echo());
  std::ostringstream log;
  log << "# config: " << cfg.echo().dump() << "\n";
  log << "class,iteration,log_likelihood\n";
  for (std::size_t y = 0; y < ws.fit_log.size(); ++y)
    for (std::size_t it = 0; it < ws.fit_log[y].size(); ++it)
      log << m.labels().name(static_cast<LabelIndex>(y)) << "," << it + 1 << "," << fmt(ws.fit_log[y][it]) << "\n";
  io::write_text_file(cfg.out + ".log.csv", log.str());
  out << "fitted mixture: classes=" << m.labels().size() << " components=" << m.components()
      << " slots=" << m.slots() << " train=" << ws.train.size() << "\n";
  for (std::size_t y = 0; y < ws.fit_log.size(); ++y)
    out << "class " << m.labels().name(static_cast<LabelIndex>(y)) << ": iterations=" << ws.fit_log[y].size()
        << " log_likelihood=" << fmt(ws.fit_log[y].back()) << "\n";
  return kOk;
}

int cmd_pursue(const RunConfig& cfg, std::ostream& out) {
  Workspace ws;
  load_data(cfg, ws);
  build_model(cfg, ws);
  const auto traces = pursue_all(cfg, ws, cfg.term);
  const auto text = io::traces_to_jsonl(config_with_labels(cfg, ws.train.labels), traces, ws.train.labels);
  if (cfg.out.empty()) {
    out << text;
  } else {
    io::write_text_file(cfg.out, text);
  }
  out << summary_line(summarize(traces, *ws.qset)) << "\n";
  return kOk;
}

int cmd_curve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Workspace ws;
  load_data(cfg, ws);
  build_model(cfg, ws);
  auto eps = cfg.eps;
  std::sort(eps.begin(), eps.end());
  TerminationConfig base = cfg.term;
  base.epsilon = eps.front();
  const auto traces = pursue_all(cfg, ws, base);
  std::ostringstream csv;
  csv << "# config: " << cfg.echo().dump() << "\n";
  csv << "epsilon,mean_length,accuracy\n";
  double prev_len = std::numeric_limits<double>::infinity();
  for (double e : eps) {
    TerminationConfig t = base;
    t.epsilon = e;
    std::vector<ExplanationTrace> at;
    at.reserve(traces.size());
    for (const auto& tr : traces) at.push_back(retarget(tr, base, t));
    const auto s = summarize(at, *ws.qset);
    csv << fmt(e) << "," << fmt(s.mean_length) << "," << fmt(s.accuracy) << "\n";
    if (s.mean_length > prev_len) err << "warning: mean length rises from " << fmt(prev_len) << " at epsilon " << fmt(e) << "\n";
    prev_len = s.mean_length;
  }
  emit(cfg, csv.str(), out);
  return kOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  Workspace ws;
  load_data(cfg, ws);
  build_model(cfg, ws);
  const auto traces = pursue_all(cfg, ws, cfg.term);
  const auto ip = summarize(traces, *ws.qset);

  const auto tree = cart_train(ws.train, *ws.qset, cfg.cart_depth, cfg.cart_min_leaf);
  double cart_len = 0.0, cart_ok = 0.0;
  for (const auto& item : ws.test.items) {
    const auto prims = ws.qset->primitives(item.instance);
    std::size_t at = 0, depth = 0;
    LabelIndex pred = tree.nodes[0].label;
    for (;;) {
      const auto& node = tree.nodes[at];
      pred = node.label;
      if (node.leaf) break;
      const auto a = ws.qset->answer_from_primitives(prims, node.query).index(ws.qset->query(node.query).answer_cardinality);
      ++depth;
      if (node.children[a] < 0) break;
      at = static_cast<std::size_t>(node.children[a]);
    }
    cart_len += static_cast<double>(depth);
    cart_ok += pred == item.label ? 1.0 : 0.0;
  }

  auto po = pursuit_options(cfg);
  std::vector<LabelIndex> map_pred(ws.test.size());
  const auto n = static_cast<std::ptrdiff_t>(ws.test.size());
  const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    map_pred[i] = map_using_full_q(*ws.model, *ws.qset, ws.test.items[i].instance, po.inference);
  double map_ok = 0.0;
  for (std::size_t i = 0; i < ws.test.size(); ++i) map_ok += map_pred[i] == ws.test.items[i].label ? 1.0 : 0.0;

  const double nt = static_cast<double>(std::max<std::size_t>(ws.test.size(), 1));
  std::ostringstream rep;
  rep << "# config: " << cfg.echo().dump() << "\n";
  rep << "method,accuracy,mean_length\n";
  rep << "information_pursuit," << fmt(ip.accuracy) << "," << fmt(ip.mean_length) << "\n";
  rep << "cart," << fmt(cart_ok / nt) << "," << fmt(cart_len / nt) << "\n";
  rep << "map_using_q," << fmt(map_ok / nt) << "," << fmt(static_cast<double>(ws.qset->size())) << "\n";
  emit(cfg, rep.str(), out);
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  VerifyOptions vo;
  vo.seed = cfg.seed;
  vo.priors = cfg.verify_priors;
  vo.corrupt_huffman = cfg.corrupt_huffman;
  const auto rep = run_verification(vo);
  const std::string text = "# config: " + cfg.echo().dump() + "\n" + rep.text();
  emit(cfg, text, out);
  if (!cfg.out.empty()) out << (rep.passed() ? "verification passed\n" : "verification FAILED\n");
  return rep.passed() ? kOk : kVerifyFailed;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    auto cfg = parse_args(argc, argv, out);
    if (!cfg) return kOk;
    if (cfg->workers > 0) omp_set_num_threads(cfg->workers);
    if (cfg->subcommand == "fit") return cmd_fit(*cfg, out);
    if (cfg->subcommand == "pursue") return cmd_pursue(*cfg, out);
    if (cfg->subcommand == "curve") return cmd_curve(*cfg, out, err);
    if (cfg->subcommand == "compare") return cmd_compare(*cfg, out);
    return cmd_verify(*cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const DegenerateHistory& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace ip::cli
