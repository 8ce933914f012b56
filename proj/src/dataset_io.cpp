#include "seqrule/dataset_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "seqrule/dsl.hpp"

namespace seqrule {

Dataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file");

  int vocab = 0, maxt = 0;
  {
    std::istringstream hs(line);
    std::string tag_vocab, tag_maxt;
    if (!(hs >> tag_vocab >> vocab >> tag_maxt >> maxt) || tag_vocab != "#VOCAB" ||
        tag_maxt != "#MAXT")
      throw std::runtime_error("dataset header must be '#VOCAB <n> #MAXT <t>'");
    if (vocab <= 0) throw std::runtime_error("dataset vocabulary must be positive");
  }

  Dataset ds;
  ds.vocab_size = vocab;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') continue;

    Record rec(vocab);
    std::istringstream ls(line);
    std::string visit_text;
    while (ls >> visit_text) {
      Bitset visit(static_cast<std::size_t>(vocab));
      if (visit_text != "-") {
        std::stringstream vs(visit_text);
        std::string code_text;
        int prev = -1;
        while (std::getline(vs, code_text, ',')) {
          int code;
          try {
            std::size_t used = 0;
            code = std::stoi(code_text, &used);
            if (used != code_text.size()) throw std::invalid_argument("");
          } catch (const std::exception&) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": bad code '" +
                                     code_text + "'");
          }
          if (code < 0 || code >= vocab)
            throw std::runtime_error("line " + std::to_string(line_no) + ": code " +
                                     std::to_string(code) + " out of vocabulary");
          if (code <= prev)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": visit codes must be sorted and unique");
          prev = code;
          visit.set(static_cast<std::size_t>(code));
        }
      }
      rec.push_visit(std::move(visit));
    }
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
  int maxt = 0;
  for (const auto& rec : dataset.records) maxt = std::max(maxt, rec.steps());
  out << "#VOCAB " << dataset.vocab_size << " #MAXT " << maxt << "\n";
  for (const auto& rec : dataset.records) {
    for (int t = 1; t <= rec.steps(); ++t) {
      if (t > 1) out << " ";
      const Bitset& v = rec.visit(t);
      bool any = false;
      for (int c = 0; c < rec.vocab_size(); ++c) {
        if (!v.test(static_cast<std::size_t>(c))) continue;
        if (any) out << ",";
        out << c;
        any = true;
      }
      if (!any) out << "-";
    }
    out << "\n";
  }
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return read_dataset(in);
}

void write_dataset_file(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  write_dataset(dataset, out);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

RuleSet read_rules_file(const std::string& path) { return parse_rules(read_text_file(path)); }

void write_rules_file(const RuleSet& rules, const std::string& path) {
  write_text_file(path, serialize_rules(rules));
}

}  // namespace seqrule
