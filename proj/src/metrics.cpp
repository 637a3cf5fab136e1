#include "irony/metrics.hpp"

#include <iomanip>
#include <sstream>

#include "irony/error.hpp"

namespace irony {

namespace {

const char* class_name(Task task, int c) {
  static const char* a[] = {"non-ironic", "ironic"};
  static const char* b[] = {"non-irony", "polarity-contrast", "other-verbal", "situational"};
  return task == Task::A ? a[c] : b[c];
}

}  // namespace

Prf prf_from_counts(long tp, long fp, long fn) {
  Prf r;
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

EvalReport evaluate_confusion(const ConfusionMatrix& confusion, Task task, MacroMode macro) {
  const int c = num_classes(task);
  if (static_cast<int>(confusion.size()) != c) throw Error(ErrorKind::Validation, "confusion matrix has the wrong size");
  for (const auto& row : confusion) {
    if (static_cast<int>(row.size()) != c) throw Error(ErrorKind::Validation, "confusion matrix is not square");
    for (long v : row) {
      if (v < 0) throw Error(ErrorKind::Validation, "negative confusion count");
    }
  }
  EvalReport r;
  r.task = task;
  r.macro = macro;
  r.confusion = confusion;
  long trace = 0;
  for (int i = 0; i < c; ++i) {
    trace += confusion[i][i];
    for (int j = 0; j < c; ++j) r.total += confusion[i][j];
  }
  if (r.total == 0) throw Error(ErrorKind::Validation, "nothing to evaluate");
  r.accuracy = static_cast<double>(trace) / static_cast<double>(r.total);

  for (int k = 0; k < c; ++k) {
    long fp = 0;
    long fn = 0;
    for (int i = 0; i < c; ++i) {
      if (i == k) continue;
      fp += confusion[i][k];
      fn += confusion[k][i];
    }
    r.per_class.push_back(prf_from_counts(confusion[k][k], fp, fn));
  }

  if (task == Task::A) {
    r.aggregate = r.per_class[1];
  } else {
    for (const auto& p : r.per_class) {
      r.aggregate.precision += p.precision / c;
      r.aggregate.recall += p.recall / c;
      r.aggregate.f1 += p.f1 / c;
    }
    if (macro == MacroMode::F1OfMeans) {
      const double s = r.aggregate.precision + r.aggregate.recall;
      r.aggregate.f1 = s > 0.0 ? 2.0 * r.aggregate.precision * r.aggregate.recall / s : 0.0;
    }
  }
  return r;
}

EvalReport evaluate(std::span<const int> gold, std::span<const int> predicted, Task task, MacroMode macro) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorKind::Validation, "gold has " + std::to_string(gold.size()) + " labels but predictions have " +
                                           std::to_string(predicted.size()));
  }
  if (gold.empty()) throw Error(ErrorKind::Validation, "nothing to evaluate");
  const int c = num_classes(task);
  ConfusionMatrix m(static_cast<std::size_t>(c), std::vector<long>(static_cast<std::size_t>(c), 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (int label : {gold[i], predicted[i]}) {
      if (label < 0 || label >= c) {
        throw Error(ErrorKind::Validation, "label " + std::to_string(label) + " is not valid for subtask " +
                                               to_string(task));
      }
    }
    ++m[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(predicted[i])];
  }
  return evaluate_confusion(m, task, macro);
}

void write_report_text(std::ostream& out, const EvalReport& r) {
  const int c = static_cast<int>(r.per_class.size());
  const auto pct = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << 100.0 * v;
    return s.str();
  };
  out << "subtask " << to_string(r.task) << ", " << r.total << " tweets\n\n";
  out << std::left << std::setw(20) << "class" << std::right << std::setw(10) << "precision" << std::setw(10)
      << "recall" << std::setw(10) << "f1" << '\n';
  for (int k = 0; k < c; ++k) {
    out << std::left << std::setw(20) << class_name(r.task, k) << std::right << std::setw(10)
        << pct(r.per_class[k].precision) << std::setw(10) << pct(r.per_class[k].recall) << std::setw(10)
        << pct(r.per_class[k].f1) << '\n';
  }
  out << '\n';
  const char* agg = r.task == Task::A ? "ironic" : (r.macro == MacroMode::MeanOfF1 ? "macro" : "macro (f1 of means)");
  out << std::left << std::setw(20) << "accuracy" << std::right << std::setw(10) << pct(r.accuracy) << '\n';
  out << std::left << std::setw(20) << agg << std::right << std::setw(10) << pct(r.aggregate.precision)
      << std::setw(10) << pct(r.aggregate.recall) << std::setw(10) << pct(r.aggregate.f1) << "\n\n";
  out << "confusion (rows gold, columns predicted)\n";
  for (const auto& row : r.confusion) {
    for (long v : row) out << std::setw(8) << v;
    out << '\n';
  }
}

void write_report_tsv(std::ostream& out, const EvalReport& r) {
  const auto old = out.precision(17);
  out << "metric\tclass\tvalue\n";
  out << "accuracy\tall\t" << r.accuracy << '\n';
  out << "precision\taggregate\t" << r.aggregate.precision << '\n';
  out << "recall\taggregate\t" << r.aggregate.recall << '\n';
  out << "f1\taggregate\t" << r.aggregate.f1 << '\n';
  for (std::size_t k = 0; k < r.per_class.size(); ++k) {
    out << "precision\t" << k << '\t' << r.per_class[k].precision << '\n';
    out << "recall\t" << k << '\t' << r.per_class[k].recall << '\n';
    out << "f1\t" << k << '\t' << r.per_class[k].f1 << '\n';
  }
  for (std::size_t i = 0; i < r.confusion.size(); ++i) {
    for (std::size_t j = 0; j < r.confusion[i].size(); ++j) {
      out << "confusion\t" << i << ',' << j << '\t' << r.confusion[i][j] << '\n';
    }
  }
  out.precision(old);
}

}  // namespace irony
