#include <stdio.h>
#include <string.h>
#include "nilsep.h"

static int check(NilsepStatus st, NilsepStatus want, const char *what) {
    if (st != want) {
        const char *msg = nilsep_last_error_message();
        fprintf(stderr, "%s: status %d (%s)\n", what, (int)st, msg ? msg : "no message");
        return 1;
    }
    return 0;
}

int main(void) {
    int bad = 0;
    NilsepTuple *a = NULL, *b = NULL;
    NilsepSet *s = NULL;
    char *word = NULL;
    char *value = NULL;

    const int64_t ea[] = {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0};
    const int64_t eb[] = {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    bad |= check(nilsep_tuple_from_ints(3, 2, ea, &a), NILSEP_STATUS_OK, "tuple a");
    bad |= check(nilsep_tuple_from_ints(3, 2, eb, &b), NILSEP_STATUS_OK, "tuple b");
    bad |= check(nilsep_set_new("S32", 2, &s), NILSEP_STATUS_OK, "set");
    bad |= check(nilsep_separate(s, a, b, &word), NILSEP_STATUS_OK, "separate");
    if (!word || strcmp(word, "12") != 0) {
        fprintf(stderr, "expected separating word 12\n");
        bad = 1;
    }
    bad |= check(nilsep_eval_word(a, "12", &value), NILSEP_STATUS_OK, "eval");
    if (!value || strcmp(value, "1") != 0) {
        fprintf(stderr, "expected tr(12) = 1\n");
        bad = 1;
    }
    bad |= check(nilsep_tuple_from_json("{\"size\":2,\"matrices\":[[[1,0],[0,0]]]}", &b),
                 NILSEP_STATUS_NOT_NILPOTENT, "non-nilpotent");

    nilsep_string_free(word);
    nilsep_string_free(value);
    nilsep_set_free(s);
    nilsep_tuple_free(a);
    nilsep_tuple_free(b);
    if (!bad) {
        puts("ok");
    }
    return bad;
}
