#pragma once

#define SCMA_VERSION "0.1.0"
