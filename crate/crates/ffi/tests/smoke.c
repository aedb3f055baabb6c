#include <stdio.h>
#include <string.h>
#include "vgraph.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  VgGraph *g = NULL;
  CHECK(vg_graph_parse("n=3; 1-2, 2-3, 1-3", VG_FORMAT_AUTO, &g) == VG_STATUS_OK);
  VgVerdict v;
  VgOptions opts = vg_default_options();
  CHECK(vg_check(g, &opts, &v) == VG_STATUS_OK);
  CHECK(v.overall == VG_OVERALL_SOLVABLE_BY_MOVES);
  CHECK(v.kernel_dim == 18);
  vg_graph_free(g);

  size_t cycle[] = {0, 1, 1, 2, 2, 3, 3, 0};
  CHECK(vg_graph_new(4, cycle, 4, &g) == VG_STATUS_OK);
  CHECK(vg_check(g, NULL, &v) == VG_STATUS_OK);
  CHECK(v.overall == VG_OVERALL_NOT_SOLVABLE);
  CHECK(v.violated_rule == VG_RULE_ADJACENT_DEGREE2);
  char *text = NULL;
  CHECK(vg_graph_to_string(g, VG_FORMAT_GRAPH6, &text) == VG_STATUS_OK);
  CHECK(strcmp(text, "Cl") == 0);
  vg_string_free(text);
  vg_graph_free(g);

  CHECK(vg_graph_parse("n=2; 1-1", VG_FORMAT_EDGE_LIST, &g) == VG_STATUS_INVALID);
  CHECK(vg_last_error_message() != NULL);

  size_t e = 0;
  CHECK(vg_e_min(9, &e) == VG_STATUS_OK && e == 12);
  printf("ok %s\n", vg_version());
  return 0;
}
