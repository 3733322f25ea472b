#ifndef EPQ_ERROR_HPP
#define EPQ_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace epq {

enum class ErrorCode {
  kInfeasibleRates,
  kOutOfRangeFraction,
  kNonpositiveRate,
  kNegativeCost,
  kInvalidParameter,
  kDomain,
  kNoRoot,
  kNoSignChange,
  kNegativePeriod,
  kNoInteriorOptimum,
  kMinimizerFailed,
  kInvalidScenario,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace epq

#endif  // EPQ_ERROR_HPP
