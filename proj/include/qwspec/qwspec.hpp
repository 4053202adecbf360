#ifndef QWSPEC_QWSPEC_HPP
#define QWSPEC_QWSPEC_HPP

#include "qwspec/types.hpp"
#include "qwspec/model.hpp"
#include "qwspec/transfer.hpp"
#include "qwspec/spectrum.hpp"
#include "qwspec/index.hpp"
#include "qwspec/oracle.hpp"
#include "qwspec/io.hpp"
#include "qwspec/sweep.hpp"
#include "qwspec/verify.hpp"

#endif  // QWSPEC_QWSPEC_HPP
