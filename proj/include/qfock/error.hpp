#pragma once

#include <stdexcept>
#include <string>

namespace qfock {

enum class errc {
  not_unimodular,
  index_out_of_range,
  not_symmetric,
  bad_root,
  cutoff_too_small,
  word_too_long,
  support_overlap,
  range_error,
  degenerate_measure,
  not_group_symmetric,
  boson_case,
  envelope_exceeded,
  config_error,
  invalid_argument,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_unimodular:      return "NotUnimodular";
    case errc::index_out_of_range:  return "IndexOutOfRange";
    case errc::not_symmetric:       return "NotSymmetric";
    case errc::bad_root:            return "BadRoot";
    case errc::cutoff_too_small:    return "CutoffTooSmall";
    case errc::word_too_long:       return "WordTooLong";
    case errc::support_overlap:     return "SupportOverlap";
    case errc::range_error:         return "RangeError";
    case errc::degenerate_measure:  return "DegenerateMeasure";
    case errc::not_group_symmetric: return "NotGroupSymmetric";
    case errc::boson_case:          return "BosonCase";
    case errc::envelope_exceeded:   return "EnvelopeExceeded";
    case errc::config_error:        return "ConfigError";
    case errc::invalid_argument:    return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace qfock
