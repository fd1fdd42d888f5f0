#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace motioncone {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A limit-surface query was given an invalid twist or wrench.
class LimitSurfaceError : public Error {
 public:
  using Error::Error;
};

/// The grasp-wrench quadratic has no root with a positive pusher force: gravity
/// cannot be balanced along this pusher direction at the current grasp force.
class NoPositiveRoot : public Error {
 public:
  NoPositiveRoot(const std::string& what, int generator = -1)
      : Error(what), generator_(generator) {}
  int generator() const { return generator_; }

 private:
  int generator_;
};

/// Both quadratic roots admit a positive pusher force; uniqueness fails.
class AmbiguousRoot : public Error {
 public:
  AmbiguousRoot(const std::string& what, int generator = -1)
      : Error(what), generator_(generator) {}
  int generator() const { return generator_; }

 private:
  int generator_;
};

class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

class ConeUnavailable : public Error {
 public:
  using Error::Error;
};

class InfeasibleStart : public Error {
 public:
  using Error::Error;
};

class NoPlanFound : public Error {
 public:
  using Error::Error;
};

/// Scene validation failure; carries every issue found, not only the first.
class SceneError : public Error {
 public:
  explicit SceneError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

}  // namespace motioncone
