#pragma once

#include <stdexcept>
#include <string>

namespace corsica {

/// Raised for malformed inputs: unreadable trees, bad manifests, schema
/// mismatches, inconsistent reports. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IngestError : public DataError {
 public:
  using DataError::DataError;
};

class CrawlError : public DataError {
 public:
  using DataError::DataError;
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace corsica
