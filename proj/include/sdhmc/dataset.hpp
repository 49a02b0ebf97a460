#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sdhmc {

struct SurveyData {
  std::vector<std::uint8_t> answers;
};

struct GmmData {
  std::vector<double> values;
};

struct HmmData {
  std::vector<double> values;
  int n_states = 0;
  double noise = 0.0;
};

SurveyData load_survey(std::istream& in);
GmmData load_gmm(std::istream& in);
HmmData load_hmm(std::istream& in);

SurveyData load_survey_file(const std::string& path);
GmmData load_gmm_file(const std::string& path);
HmmData load_hmm_file(const std::string& path);

void save_survey(std::ostream& out, const SurveyData& data,
                 const std::vector<std::string>& comments = {});
void save_gmm(std::ostream& out, const GmmData& data,
              const std::vector<std::string>& comments = {});
void save_hmm(std::ostream& out, const HmmData& data,
              const std::vector<std::string>& comments = {});

}  // namespace sdhmc
