//! Small hand-made datasets shared by tests, docs and the bindings.

use crate::model::Dataset;

/// IST text of the three-genome example: `S1[1,8]`, `S2[2,7]` and `S3[1,8]`
/// form a closed set of 1-approximate weak common intervals.
pub const THREE_GENOMES_IST: &str = "\
>S1
g
b p
x
n p
d o s
a z
e w
f
v l
h u z
j r
k
>S2
c k
f n p
w
b d
x
c l m
a g
r
a w x
p
f z
>S3
d
g b
a
p s
n
a b
f m w
e w
k
j u
h
c r
z
";

pub fn three_genomes() -> Dataset {
    crate::io::parse_ist(THREE_GENOMES_IST.as_bytes()).expect("fixture parses")
}
