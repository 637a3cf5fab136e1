#include <pybind11/gil_safe_call_once.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <memory>
#include <mutex>

#include "irony/brown.hpp"
#include "irony/config.hpp"
#include "irony/dataset.hpp"
#include "irony/ensemble.hpp"
#include "irony/error.hpp"
#include "irony/metrics.hpp"
#include "irony/normalize.hpp"
#include "irony/pipeline.hpp"
#include "irony/pos_tagger.hpp"
#include "irony/resources.hpp"
#include "irony/tokenize.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace irony;

namespace {

struct Shared {
  std::shared_ptr<const ResourceBundle> resources;
  std::shared_ptr<const PosTagger> tagger;
  std::shared_ptr<const Normalizer> normalizer;
};

// Resources are costly to load; keep one bundle per data directory.
const Shared& shared(const fs::path& data_dir) {
  static std::mutex mu;
  static std::map<fs::path, Shared> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(data_dir);
  if (it == cache.end()) {
    RunConfig c;
    c.data_dir = data_dir;
    Shared s;
    s.resources = std::make_shared<const ResourceBundle>(load_resources(c.resource_paths()));
    s.tagger = std::make_shared<const PosTagger>(PosTagger::load(c.tagger_path()));
    s.normalizer = std::make_shared<const Normalizer>(*s.resources);
    it = cache.emplace(data_dir, std::move(s)).first;
  }
  return it->second;
}

Task parse_task(const std::string& t) {
  if (t == "A" || t == "a") return Task::A;
  if (t == "B" || t == "b") return Task::B;
  throw Error(ErrorKind::Config, "task must be A or B, got '" + t + "'");
}

LabeledCorpus corpus_from(const std::vector<std::string>& texts, const std::vector<int>* labels, Task task) {
  LabeledCorpus c;
  c.task = task;
  c.provenance = "python";
  for (std::size_t i = 0; i < texts.size(); ++i) {
    RawTweet t{static_cast<std::int64_t>(i + 1), texts[i], std::nullopt};
    if (labels) t.label = (*labels)[i];
    c.tweets.push_back(std::move(t));
  }
  return c;
}

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::Config: return "config";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::Io: return "io";
    case ErrorKind::TaskMismatch: return "task_mismatch";
    case ErrorKind::Internal: return "internal";
  }
  return "internal";
}

py::array_t<double> to_numpy(const RowMatrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data(), m.data() + m.size(), out.mutable_data());
  return out;
}

class PyModel {
 public:
  explicit PyModel(EnsembleModel m) : model_(std::move(m)) {}

  std::string task() const { return to_string(model_.task); }
  std::size_t width() const { return model_.pipeline->width(); }
  std::size_t members() const { return model_.members.size(); }

  std::vector<int> predict(const std::vector<std::string>& texts) const {
    std::vector<int> out;
    for (const auto& v : votes(texts)) out.push_back(v.label);
    return out;
  }

  py::array_t<double> predict_proba(const std::vector<std::string>& texts) const {
    const auto v = votes(texts);
    const int classes = num_classes(model_.task);
    RowMatrix m(static_cast<Eigen::Index>(v.size()), classes);
    for (std::size_t i = 0; i < v.size(); ++i)
      for (int c = 0; c < classes; ++c) m(static_cast<Eigen::Index>(i), c) = v[i].mean_probs[static_cast<std::size_t>(c)];
    return to_numpy(m);
  }

  py::array_t<double> features(const std::vector<std::string>& texts) const {
    RowMatrix m;
    {
      py::gil_scoped_release release;
      const auto prepared = model_.pipeline->prepare_all(corpus_from(texts, nullptr, model_.task).tweets);
      m = model_.pipeline->transform_batch(prepared);
    }
    return to_numpy(m);
  }

  std::vector<std::tuple<std::string, std::string, std::size_t, std::size_t>> layout() const {
    std::vector<std::tuple<std::string, std::string, std::size_t, std::size_t>> out;
    for (const auto& b : model_.pipeline->layout().blocks()) out.emplace_back(b.family, b.name, b.offset, b.width);
    return out;
  }

  void save(const fs::path& path) const { save_model(model_, path); }

 private:
  std::vector<VoteResult> votes(const std::vector<std::string>& texts) const {
    py::gil_scoped_release release;
    std::vector<VoteResult> out;
    for (const auto& p : predict_corpus(model_, corpus_from(texts, nullptr, model_.task))) out.push_back(p.vote);
    return out;
  }

  EnsembleModel model_;
};

PyModel train(const std::vector<std::string>& texts, const std::vector<int>& labels, const std::string& task,
              std::uint64_t seed, const std::map<std::string, std::string>& options, const fs::path& data_dir) {
  if (texts.size() != labels.size()) {
    throw Error(ErrorKind::Validation, std::to_string(texts.size()) + " texts but " + std::to_string(labels.size()) +
                                           " labels");
  }
  RunConfig c;
  c.data_dir = data_dir;
  c.set("run.task", task);
  c.seed = seed;
  for (const auto& [k, v] : options) c.set(k, v);
  const auto& s = shared(data_dir);
  const auto corpus = corpus_from(texts, &labels, c.task);
  for (const auto& t : corpus.tweets) {
    if (*t.label < 0 || *t.label >= num_classes(c.task)) {
      throw Error(ErrorKind::Validation, "label " + std::to_string(*t.label) + " is not valid for subtask " + task);
    }
  }
  py::gil_scoped_release release;
  return PyModel(train_ensemble(corpus, s.resources, s.tagger, c.features, c.ensemble()));
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["accuracy"] = r.accuracy;
  d["precision"] = r.aggregate.precision;
  d["recall"] = r.aggregate.recall;
  d["f1"] = r.aggregate.f1;
  py::list per;
  for (const auto& p : r.per_class) per.append(py::make_tuple(p.precision, p.recall, p.f1));
  d["per_class"] = per;
  d["confusion"] = r.confusion;
  return d;
}

}  // namespace

PYBIND11_MODULE(_irony, m) {
  m.doc() = "Tweet irony detection core";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> irony_error;
  irony_error.call_once_and_store_result(
      [&] { return py::object(py::exception<Error>(m, "IronyError", PyExc_RuntimeError)); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& cls = irony_error.get_stored();
      py::object exc = cls(std::string(to_string(e.kind())) + ": " + e.what());
      exc.attr("kind") = kind_name(e.kind());
      PyErr_SetObject(cls.ptr(), exc.ptr());
    }
  });

  m.def("default_data_dir", [] { return fs::path(IRONY_DATA_DIR); });

  m.def(
      "normalize", [](const std::string& text, const fs::path& data_dir) { return shared(data_dir).normalizer->normalize(text); },
      py::arg("text"), py::arg("data_dir"));
  m.def("tokenize", [](const std::string& text) { return tokenize(text); }, py::arg("text"));
  m.def(
      "pos_tag",
      [](const std::vector<std::string>& tokens, const fs::path& data_dir) { return shared(data_dir).tagger->tag(tokens); },
      py::arg("tokens"), py::arg("data_dir"));

  m.def(
      "evaluate",
      [](const std::vector<int>& gold, const std::vector<int>& predicted, const std::string& task,
         const std::string& macro) {
        const MacroMode mode = macro == "f1-of-means" ? MacroMode::F1OfMeans : MacroMode::MeanOfF1;
        return report_dict(evaluate(gold, predicted, parse_task(task), mode));
      },
      py::arg("gold"), py::arg("predicted"), py::arg("task") = "A", py::arg("macro") = "mean-f1");

  m.def(
      "split_folds", [](const std::vector<int>& labels, int k, std::uint64_t seed) { return split_folds(labels, k, seed); },
      py::arg("labels"), py::arg("k") = 10, py::arg("seed") = 0);

  m.def(
      "brown_clusters",
      [](const std::vector<std::vector<std::string>>& sentences, int clusters, int min_count) {
        const auto b = train_brown(collect_bigram_stats(sentences, min_count), clusters);
        std::map<std::string, int> of;
        for (std::size_t i = 0; i < b.words.size(); ++i) of[b.words[i]] = b.cluster_of[i];
        return py::make_tuple(of, b.ami);
      },
      py::arg("sentences"), py::arg("clusters"), py::arg("min_count") = 1);

  py::class_<PyModel>(m, "Model")
      .def_property_readonly("task", &PyModel::task)
      .def_property_readonly("width", &PyModel::width)
      .def_property_readonly("members", &PyModel::members)
      .def("predict", &PyModel::predict, py::arg("texts"))
      .def("predict_proba", &PyModel::predict_proba, py::arg("texts"))
      .def("features", &PyModel::features, py::arg("texts"))
      .def("layout", &PyModel::layout)
      .def("save", &PyModel::save, py::arg("path"))
      .def_static("load", [](const fs::path& p) { return PyModel(load_model(p)); }, py::arg("path"));

  m.def("train", &train, py::arg("texts"), py::arg("labels"), py::arg("task"), py::arg("seed"), py::arg("options"),
        py::arg("data_dir"));
}
