#define DOCTEST_CONFIG_IMPLEMENT
#include "breather/field.hpp"
#include "doctest.h"

int main(int argc, char** argv) {
    breather::set_thread_budget(4);
    return doctest::Context(argc, argv).run();
}
