#include "sdhmc/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sdhmc {

namespace {

// Pulls the next record line, skipping blanks and '#' comments. Returns false
// at end of input.
bool next_record(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    if (line[begin] == '#') continue;
    std::size_t end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    return true;
  }
  return false;
}

[[noreturn]] void bad_line(int line_no, const std::string& what) {
  throw std::runtime_error("dataset: line " + std::to_string(line_no) + ": " +
                           what);
}

double parse_real(const std::string& line, int line_no) {
  std::istringstream ss(line);
  double v = 0.0;
  if (!(ss >> v) || !(ss >> std::ws).eof()) {
    bad_line(line_no, "expected a real number, got '" + line + "'");
  }
  return v;
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file: " + path);
  }
  return in;
}

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
  for (const std::string& c : comments) {
    out << "# " << c << '\n';
  }
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SurveyData load_survey(std::istream& in) {
  SurveyData data;
  std::string line;
  int line_no = 0;
  while (next_record(in, line, line_no)) {
    if (line == "0") {
      data.answers.push_back(0);
    } else if (line == "1") {
      data.answers.push_back(1);
    } else {
      bad_line(line_no, "expected 0 or 1, got '" + line + "'");
    }
  }
  if (data.answers.empty()) {
    throw std::runtime_error("dataset: no survey records found");
  }
  return data;
}

GmmData load_gmm(std::istream& in) {
  GmmData data;
  std::string line;
  int line_no = 0;
  while (next_record(in, line, line_no)) {
    data.values.push_back(parse_real(line, line_no));
  }
  if (data.values.empty()) {
    throw std::runtime_error("dataset: no observations found");
  }
  return data;
}

HmmData load_hmm(std::istream& in) {
  HmmData data;
  std::string line;
  int line_no = 0;
  if (!next_record(in, line, line_no)) {
    throw std::runtime_error("dataset: missing K=<n-states> noise=<sd> header");
  }
  int k = 0;
  double noise = 0.0;
  if (std::sscanf(line.c_str(), "K=%d noise=%lf", &k, &noise) != 2) {
    bad_line(line_no, "expected header 'K=<n-states> noise=<sd>', got '" +
                          line + "'");
  }
  if (k < 1 || !(noise > 0.0)) {
    bad_line(line_no, "header requires K >= 1 and noise > 0");
  }
  data.n_states = k;
  data.noise = noise;
  while (next_record(in, line, line_no)) {
    data.values.push_back(parse_real(line, line_no));
  }
  if (data.values.empty()) {
    throw std::runtime_error("dataset: no observations found");
  }
  return data;
}

SurveyData load_survey_file(const std::string& path) {
  auto in = open_file(path);
  return load_survey(in);
}

GmmData load_gmm_file(const std::string& path) {
  auto in = open_file(path);
  return load_gmm(in);
}

HmmData load_hmm_file(const std::string& path) {
  auto in = open_file(path);
  return load_hmm(in);
}

void save_survey(std::ostream& out, const SurveyData& data,
                 const std::vector<std::string>& comments) {
  write_comments(out, comments);
  for (std::uint8_t a : data.answers) {
    out << (a != 0 ? '1' : '0') << '\n';
  }
}

void save_gmm(std::ostream& out, const GmmData& data,
              const std::vector<std::string>& comments) {
  write_comments(out, comments);
  for (double v : data.values) {
    out << format_real(v) << '\n';
  }
}

void save_hmm(std::ostream& out, const HmmData& data,
              const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << "K=" << data.n_states << " noise=" << format_real(data.noise) << '\n';
  for (double v : data.values) {
    out << format_real(v) << '\n';
  }
}

}  // namespace sdhmc
