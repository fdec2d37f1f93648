#pragma once

#include <stdexcept>
#include <string>

namespace fxlabel {

// Base class for every error the toolkit raises on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class UnknownTokenError : public Error {
 public:
  UnknownTokenError(const std::string& kind, const std::string& token)
      : Error("unknown " + kind + " token: \"" + token + "\""),
        kind_(kind),
        token_(token) {}
  const std::string& kind() const { return kind_; }
  const std::string& token() const { return token_; }

 private:
  std::string kind_;
  std::string token_;
};

class InvalidFindingError : public Error {
 public:
  explicit InvalidFindingError(const std::string& what) : Error(what) {}
};

class DuplicateStudyIdError : public Error {
 public:
  explicit DuplicateStudyIdError(const std::string& study_id, long line = -1)
      : Error(line >= 0 ? "duplicate study_id \"" + study_id + "\" (line " +
                              std::to_string(line) + ")"
                        : "duplicate study_id \"" + study_id + "\""),
        study_id_(study_id),
        line_(line) {}
  const std::string& study_id() const { return study_id_; }
  long line() const { return line_; }

 private:
  std::string study_id_;
  long line_;
};

class MissingPredictionError : public Error {
 public:
  explicit MissingPredictionError(const std::string& study_id)
      : Error("no prediction for study_id \"" + study_id + "\""),
        study_id_(study_id) {}
  const std::string& study_id() const { return study_id_; }

 private:
  std::string study_id_;
};

class EmptyEvaluationError : public Error {
 public:
  EmptyEvaluationError() : Error("no overlapping studies to evaluate") {}
};

class UndefinedAucError : public Error {
 public:
  UndefinedAucError()
      : Error("ROC-AUC undefined: needs at least one positive and one "
              "negative study") {}
};

class MissingScoreError : public Error {
 public:
  explicit MissingScoreError(const std::string& study_id)
      : Error("prediction for study_id \"" + study_id + "\" carries no score"),
        study_id_(study_id) {}
  const std::string& study_id() const { return study_id_; }

 private:
  std::string study_id_;
};

class MemberKeyMismatchError : public Error {
 public:
  explicit MemberKeyMismatchError(const std::string& detail)
      : Error("ensemble members cover different study sets: " + detail) {}
};

class SchemaViolationError : public Error {
 public:
  explicit SchemaViolationError(const std::string& detail)
      : Error("schema violation: " + detail), detail_(detail) {}
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
};

class QuoteNotFoundError : public Error {
 public:
  explicit QuoteNotFoundError(const std::string& quote)
      : Error("cited snippet not found in report text: \"" + quote + "\"") {}
};

class BatchAbortedError : public Error {
 public:
  explicit BatchAbortedError(std::size_t failed)
      : Error("annotation batch aborted: all " + std::to_string(failed) +
              " requests failed permanently") {}
};

class ParseError : public Error {
 public:
  ParseError(long line, const std::string& reason)
      : Error("parse error at line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}
  explicit ParseError(const std::string& reason)
      : Error("parse error: " + reason), line_(-1), reason_(reason) {}
  long line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  long line_;
  std::string reason_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace fxlabel
