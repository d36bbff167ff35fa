#pragma once

#include <stdexcept>
#include <string>

namespace geoeig {

// Base of every error raised by the library. Each subclass names one
// contract violation so callers can react selectively.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_vertex : public error {
 public:
  using error::error;
};

class invalid_parameter : public error {
 public:
  using error::error;
};

class invalid_input : public error {
 public:
  using error::error;
};

class dimension_mismatch : public error {
 public:
  using error::error;
};

class not_connected : public error {
 public:
  using error::error;
};

class generation_failure : public error {
 public:
  using error::error;
};

// A matrix needs more hops than the network's communication range allows.
class range_violation : public error {
 public:
  using error::error;
};

class invalid_preconditioner : public error {
 public:
  using error::error;
};

// A polynomial filter shift with geodesic-width above one, or shifts that do
// not commute.
class invalid_shift : public error {
 public:
  using error::error;
};

}  // namespace geoeig
