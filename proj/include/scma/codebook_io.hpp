#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "scma/codebook.hpp"

namespace scma {

/// Codebook file violates the scma-codebook/1 schema. what() carries a
/// JSON-pointer style location.
class SchemaError : public std::runtime_error {
public:
  SchemaError(const std::string& pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

private:
  std::string pointer_;
};

inline constexpr const char* kCodebookSchema = "scma-codebook/1";

nlohmann::json codebook_to_json(const CodebookSet& cbs);
CodebookSet codebook_from_json(const nlohmann::json& j);

void save_codebook(const CodebookSet& cbs, const std::string& path);
CodebookSet load_codebook(const std::string& path);

}  // namespace scma
