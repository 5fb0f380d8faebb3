use crate::error::{Error, Result};

/// One synset line of `data.noun`, reduced to what the is-a graph needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataRecord {
    pub offset: u32,
    pub lemmas: Vec<String>,
    /// Targets of `@` and `@i` pointers.
    pub hypernyms: Vec<u32>,
    /// 1-based line number in the source file.
    pub line: usize,
}

fn malformed(file: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Malformed { file: file.to_string(), line, message: message.into() }
}

/// License preamble lines start with two spaces.
fn is_header(line: &str) -> bool {
    line.starts_with("  ") || line.trim().is_empty()
}

/// Parses `data.noun`:
/// `offset lex_filenum ss_type w_cnt [word lex_id]… p_cnt [ptr offset pos src/tgt]… | gloss`
pub fn parse_data_noun(text: &str) -> Result<Vec<DataRecord>> {
    const FILE: &str = "data.noun";
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if is_header(line) {
            continue;
        }
        let body = line.split(" | ").next().unwrap_or(line);
        let mut fields = body.split_ascii_whitespace();
        let mut next = |what: &str| fields.next().ok_or_else(|| malformed(FILE, lineno, format!("missing {what}")));

        let offset: u32 = next("offset")?
            .parse()
            .map_err(|_| malformed(FILE, lineno, "offset is not a number"))?;
        next("lex_filenum")?;
        let ss_type = next("ss_type")?;
        if ss_type != "n" {
            return Err(malformed(FILE, lineno, format!("ss_type `{ss_type}` is not a noun")));
        }
        let w_cnt = usize::from_str_radix(next("w_cnt")?, 16)
            .map_err(|_| malformed(FILE, lineno, "w_cnt is not hexadecimal"))?;
        let mut lemmas = Vec::with_capacity(w_cnt);
        for _ in 0..w_cnt {
            lemmas.push(next("word")?.to_string());
            next("lex_id")?;
        }
        let p_cnt: usize = next("p_cnt")?
            .parse()
            .map_err(|_| malformed(FILE, lineno, "p_cnt is not a number"))?;
        let mut hypernyms = Vec::new();
        for _ in 0..p_cnt {
            let symbol = next("pointer symbol")?;
            let target = next("pointer offset")?;
            let pos = next("pointer pos")?;
            next("pointer source/target")?;
            if (symbol == "@" || symbol == "@i") && pos == "n" {
                let target: u32 = target
                    .parse()
                    .map_err(|_| malformed(FILE, lineno, "pointer offset is not a number"))?;
                hypernyms.push(target);
            }
        }
        if lemmas.is_empty() {
            return Err(malformed(FILE, lineno, "synset without lemmas"));
        }
        out.push(DataRecord { offset, lemmas, hypernyms, line: lineno });
    }
    Ok(out)
}

/// Parses `index.noun`:
/// `lemma pos synset_cnt p_cnt [ptr_symbol]… sense_cnt tagsense_cnt offset…`
pub fn parse_index_noun(text: &str) -> Result<Vec<(String, Vec<u32>)>> {
    const FILE: &str = "index.noun";
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if is_header(line) {
            continue;
        }
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        if fields.len() < 6 {
            return Err(malformed(FILE, lineno, "too few fields"));
        }
        let num = |s: &str, what: &str| -> Result<usize> {
            s.parse().map_err(|_| malformed(FILE, lineno, format!("{what} is not a number")))
        };
        let synset_cnt = num(fields[2], "synset_cnt")?;
        let p_cnt = num(fields[3], "p_cnt")?;
        let first = 4 + p_cnt + 2;
        if fields.len() != first + synset_cnt {
            return Err(malformed(
                FILE,
                lineno,
                format!("expected {} fields, found {}", first + synset_cnt, fields.len()),
            ));
        }
        let offsets = fields[first..]
            .iter()
            .map(|s| num(s, "synset offset").map(|v| v as u32))
            .collect::<Result<Vec<_>>>()?;
        out.push((fields[0].to_string(), offsets));
    }
    Ok(out)
}

/// Parses `noun.exc`: `inflected base [base…]` per line.
pub fn parse_noun_exc(text: &str) -> Result<Vec<(String, Vec<String>)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut fields = line.split_ascii_whitespace();
        let Some(inflected) = fields.next() else { continue };
        let bases: Vec<String> = fields.map(str::to_string).collect();
        if bases.is_empty() {
            return Err(malformed("noun.exc", i + 1, "exception without a base form"));
        }
        out.push((inflected.to_string(), bases));
    }
    Ok(out)
}
