// Criterion implementations, included by acceptance_main.cpp.

#include "roadpulse/assign/ue.hpp"

#include <string>

namespace acceptance {

namespace {

bool placeholder(std::string& detail) {
    detail = "not yet implemented";
    return false;
}

struct Register {
    Register() { registry().push_back({"placeholder", &placeholder}); }
} g_register;

} // namespace

} // namespace acceptance
