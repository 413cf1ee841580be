#ifndef WMCT_WMCT_HPP_
#define WMCT_WMCT_HPP_

#include "cli.hpp"
#include "difftest.hpp"
#include "exec.hpp"
#include "litmus.hpp"
#include "lowering.hpp"
#include "model_aarch64.hpp"
#include "model_c11.hpp"
#include "outcomes.hpp"
#include "parse.hpp"
#include "relation.hpp"
#include "render.hpp"
#include "report.hpp"
#include "testgen.hpp"

#endif  // WMCT_WMCT_HPP_
