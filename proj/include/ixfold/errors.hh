#ifndef IXFOLD_ERRORS_HH
#define IXFOLD_ERRORS_HH

#include <stdexcept>
#include <string>

namespace ixfold {

// Exit classes used by the CLI: usage=2, input=3, resource=4, mismatch=5.
enum class ErrorClass { Usage = 2, Input = 3, Resource = 4, Mismatch = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass cls() const { return cls_; }

private:
    ErrorClass cls_;
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorClass::Input, what) {}
};

class ResourceLimit : public Error {
public:
    explicit ResourceLimit(const std::string& what) : Error(ErrorClass::Resource, what) {}
};

} // namespace ixfold

#endif
