#include "seqrule/toygen.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "seqrule/rng.hpp"

namespace seqrule {

namespace {

constexpr char kMagic[4] = {'S', 'Q', 'T', 'G'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

FreqModel::FreqModel(int vocab_size, FreqModelParams params) : vocab_(vocab_size), params_(params) {
  if (vocab_size <= 0) throw std::invalid_argument("vocab_size must be positive");
  if (params.hash_buckets < 1 || params.index_buckets < 1)
    throw std::invalid_argument("bucket counts must be positive");
  std::size_t cells = static_cast<std::size_t>(params.hash_buckets) *
                      static_cast<std::size_t>(params.index_buckets);
  counts_.assign(cells * static_cast<std::size_t>(vocab_size), 0);
  totals_.assign(cells, 0);
}

std::size_t FreqModel::bucket_of(const Record& prefix) const {
  // Hash of the previous visit's words; the empty prefix hashes like an
  // all-zero visit.
  std::uint64_t h = 0x9ae16a3b2f90404fULL;
  if (prefix.steps() > 0) {
    const Bitset& prev = prefix.visit(prefix.steps());
    for (std::uint64_t w : prev.words()) h = mix64(h ^ w);
  }
  std::size_t hb = static_cast<std::size_t>(h % static_cast<std::uint64_t>(params_.hash_buckets));
  int t = prefix.steps() + 1;  // step being predicted
  std::size_t ib = static_cast<std::size_t>(std::min(t, params_.index_buckets) - 1);
  return hb * static_cast<std::size_t>(params_.index_buckets) + ib;
}

void FreqModel::accumulate(const Dataset& dataset) {
  for (const auto& rec : dataset.records) {
    if (rec.vocab_size() != vocab_)
      throw std::invalid_argument("dataset vocabulary does not match model");
    Record prefix(vocab_);
    for (int t = 1; t <= rec.steps(); ++t) {
      std::size_t cell = bucket_of(prefix);
      ++totals_[cell];
      const Bitset& v = rec.visit(t);
      std::uint64_t* row = &counts_[cell * static_cast<std::size_t>(vocab_)];
      for (int c = 0; c < vocab_; ++c)
        if (v.test(static_cast<std::size_t>(c))) ++row[static_cast<std::size_t>(c)];
      prefix.push_visit(v);
    }
  }
}

FreqModel FreqModel::fit(const Dataset& dataset, FreqModelParams params) {
  if (dataset.vocab_size <= 0)
    throw std::invalid_argument("dataset must declare a positive vocabulary");
  FreqModel model(dataset.vocab_size, params);
  model.accumulate(dataset);
  return model;
}

std::vector<double> FreqModel::predict(const Record& prefix) const {
  std::size_t cell = bucket_of(prefix);
  double total = static_cast<double>(totals_[cell]);
  const std::uint64_t* row = &counts_[cell * static_cast<std::size_t>(vocab_)];
  std::vector<double> p(static_cast<std::size_t>(vocab_));
  for (int c = 0; c < vocab_; ++c)
    p[static_cast<std::size_t>(c)] =
        (static_cast<double>(row[static_cast<std::size_t>(c)]) + 1.0) / (total + 2.0);
  return p;
}

GeneratorAdapter FreqModel::adapter() const {
  return [this](const Record& prefix) { return predict(prefix); };
}

void FreqModel::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write model file: " + path);
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(vocab_));
  put_u32(os, static_cast<std::uint32_t>(params_.hash_buckets));
  put_u32(os, static_cast<std::uint32_t>(params_.index_buckets));
  for (std::uint64_t v : totals_) put_u64(os, v);
  for (std::uint64_t v : counts_) put_u64(os, v);
  if (!os) throw std::runtime_error("failed writing model file: " + path);
}

FreqModel FreqModel::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open model file: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a model file: " + path);
  std::uint32_t version = get_u32(is);
  if (version != kVersion)
    throw std::runtime_error("unsupported model version " + std::to_string(version));
  int vocab = static_cast<int>(get_u32(is));
  FreqModelParams params;
  params.hash_buckets = static_cast<int>(get_u32(is));
  params.index_buckets = static_cast<int>(get_u32(is));
  FreqModel model(vocab, params);
  for (auto& v : model.totals_) v = get_u64(is);
  for (auto& v : model.counts_) v = get_u64(is);
  if (!is) throw std::runtime_error("truncated model file: " + path);
  return model;
}

double dataset_nll(const FreqModel& model, const Dataset& dataset,
                   const CompiledRuleProgram* program) {
  double sum = 0.0;
  long long cells = 0;
  const int C = model.vocab_size();
  for (const auto& rec : dataset.records) {
    RealMatrix probs(rec.steps(), C);
    Record prefix(C);
    for (int t = 1; t <= rec.steps(); ++t) {
      auto p = model.predict(prefix);
      for (int c = 0; c < C; ++c) probs.at(t - 1, c) = p[static_cast<std::size_t>(c)];
      prefix.push_visit(rec.visit(t));
    }
    if (program) constrain_training_batch(probs, rec, *program);

    for (int t = 1; t <= rec.steps(); ++t)
      for (int c = 0; c < C; ++c) {
        bool y = rec.visit(t).test(static_cast<std::size_t>(c));
        double p = probs.at(t - 1, c);
        sum -= y ? std::log(p) : std::log1p(-p);
        ++cells;
      }
  }
  return cells ? sum / static_cast<double>(cells) : 0.0;
}

std::pair<FreqModel, TrainTrace> train_constrained(const Dataset& dataset,
                                                   const CompiledRuleProgram* program, int epochs,
                                                   FreqModelParams params) {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  FreqModel model(dataset.vocab_size, params);
  TrainTrace trace;
  for (int e = 0; e < epochs; ++e) {
    model.accumulate(dataset);
    trace.constrained_nll.push_back(dataset_nll(model, dataset, program));
    trace.unconstrained_nll.push_back(dataset_nll(model, dataset, nullptr));
  }
  return {std::move(model), std::move(trace)};
}

}  // namespace seqrule
