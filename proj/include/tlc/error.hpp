#pragma once

#include <stdexcept>
#include <string>

namespace tlc {

// Error categories map one-to-one onto CLI exit codes:
// InvalidInput -> 2, Extraction -> 3, TrainEval -> 4, Io -> 4.
enum class ErrorKind { kInvalidInput, kExtraction, kTrainEval, kIo };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tlc
