#pragma once

#define PNASK_VERSION_MAJOR 0
#define PNASK_VERSION_MINOR 1
#define PNASK_VERSION_PATCH 0
#define PNASK_VERSION "0.1.0"
