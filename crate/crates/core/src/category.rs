//! Lambek categories, their surface notation, and the free-group image used
//! as a quick non-derivability filter.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// A basic category such as `S`, `n`, `np` or `inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    /// Builds an atom, checking the identifier shape `[A-Za-z][A-Za-z0-9_]*`.
    pub fn new(name: &str) -> Result<Atom, CategoryParseError> {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return Err(CategoryParseError::new(0, format!("invalid atom name `{name}`"))),
        }
        if let Some(pos) = name.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')) {
            return Err(CategoryParseError::new(pos, format!("invalid atom name `{name}`")));
        }
        Ok(Atom(name.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A product-free Lambek category.
///
/// `Under(a, b)` is written `a\b` and looks for an `a` on its left to become a
/// `b`; `Over(b, a)` is written `b/a` and looks for an `a` on its right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Atom(Atom),
    Under(Arc<Category>, Arc<Category>),
    Over(Arc<Category>, Arc<Category>),
}

impl Category {
    pub fn atom(name: &str) -> Category {
        Category::Atom(Atom::new(name).expect("valid atom name"))
    }

    /// `arg\result`
    pub fn under(arg: Category, result: Category) -> Category {
        Category::Under(Arc::new(arg), Arc::new(result))
    }

    /// `result/arg`
    pub fn over(result: Category, arg: Category) -> Category {
        Category::Over(Arc::new(result), Arc::new(arg))
    }

    /// Number of slash connectives.
    pub fn connectives(&self) -> usize {
        match self {
            Category::Atom(_) => 0,
            Category::Under(a, b) | Category::Over(a, b) => 1 + a.connectives() + b.connectives(),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Category::Atom(_))
    }

    /// Every subcategory, including `self`.
    pub fn subcategories(&self) -> Vec<&Category> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            out.push(c);
            if let Category::Under(a, b) | Category::Over(a, b) = c {
                stack.push(a);
                stack.push(b);
            }
        }
        out
    }

    pub fn has_subcategory(&self, other: &Category) -> bool {
        self == other
            || match self {
                Category::Atom(_) => false,
                Category::Under(a, b) | Category::Over(a, b) => a.has_subcategory(other) || b.has_subcategory(other),
            }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        self.subcategories()
            .into_iter()
            .filter_map(|c| match c {
                Category::Atom(a) => Some(a),
                _ => None,
            })
            .collect()
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atomic() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }

    /// LaTeX math rendering (`\backslash` for the left slash).
    pub fn to_latex(&self) -> String {
        fn go(c: &Category, top: bool, out: &mut String) {
            match c {
                Category::Atom(a) => out.push_str(a.as_str()),
                Category::Under(a, b) | Category::Over(a, b) => {
                    if !top {
                        out.push('(');
                    }
                    go(a, false, out);
                    out.push_str(if matches!(c, Category::Under(..)) { " \\backslash " } else { "/" });
                    go(b, false, out);
                    if !top {
                        out.push(')');
                    }
                }
            }
        }
        let mut out = String::new();
        go(self, true, &mut out);
        out
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Atom(a) => write!(f, "{a}"),
            Category::Under(a, b) => {
                a.fmt_operand(f)?;
                f.write_str("\\")?;
                b.fmt_operand(f)
            }
            Category::Over(b, a) => {
                b.fmt_operand(f)?;
                f.write_str("/")?;
                a.fmt_operand(f)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("category syntax error at {position}: {message}")]
pub struct CategoryParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl CategoryParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        CategoryParseError { position, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Under,
    Over,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, CategoryParseError> {
    let mut toks = Vec::new();
    let mut iter = text.char_indices().peekable();
    while let Some(&(pos, c)) = iter.peek() {
        match c {
            c if c.is_whitespace() => {
                iter.next();
            }
            '\\' => {
                iter.next();
                toks.push((pos, Tok::Under));
            }
            '/' => {
                iter.next();
                toks.push((pos, Tok::Over));
            }
            '(' => {
                iter.next();
                toks.push((pos, Tok::Open));
            }
            ')' => {
                iter.next();
                toks.push((pos, Tok::Close));
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&(_, c)) = iter.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        iter.next();
                    } else {
                        break;
                    }
                }
                toks.push((pos, Tok::Atom(name)));
            }
            other => return Err(CategoryParseError::new(pos, format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    // expr := operand (('\' | '/') operand)?
    fn expr(&mut self) -> Result<Category, CategoryParseError> {
        let left = self.operand()?;
        let cat = match self.peek() {
            Some(Tok::Under) => {
                self.pos += 1;
                Category::under(left, self.operand()?)
            }
            Some(Tok::Over) => {
                self.pos += 1;
                Category::over(left, self.operand()?)
            }
            _ => return Ok(left),
        };
        if matches!(self.peek(), Some(Tok::Under | Tok::Over)) {
            return Err(CategoryParseError::new(
                self.offset(),
                "ambiguous slash sequence; parenthesize nested categories",
            ));
        }
        Ok(cat)
    }

    fn operand(&mut self) -> Result<Category, CategoryParseError> {
        let at = self.offset();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Atom(name))) => {
                self.pos += 1;
                Ok(Category::Atom(Atom(name.into())))
            }
            Some((_, Tok::Open)) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(CategoryParseError::new(self.offset(), format!("unbalanced parenthesis opened at {at}"))),
                }
            }
            Some((_, Tok::Under | Tok::Over)) => Err(CategoryParseError::new(at, "dangling slash")),
            Some((_, Tok::Close)) => Err(CategoryParseError::new(at, "unexpected `)`")),
            None => Err(CategoryParseError::new(at, "unexpected end of input")),
        }
    }
}

/// Parses the surface notation, e.g. `(np\S)/np`.
pub fn parse_category(text: &str) -> Result<Category, CategoryParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len() };
    let cat = p.expr()?;
    if p.pos != p.toks.len() {
        let msg = match p.peek() {
            Some(Tok::Close) => "unbalanced `)`",
            _ => "trailing input",
        };
        return Err(CategoryParseError::new(p.offset(), msg));
    }
    Ok(cat)
}

impl FromStr for Category {
    type Err = CategoryParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_category(s)
    }
}

/// A generator of the free group on atoms, possibly inverted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub atom: Atom,
    pub inverse: bool,
}

impl Generator {
    fn inverted(&self) -> Generator {
        Generator { atom: self.atom.clone(), inverse: !self.inverse }
    }

    fn cancels(&self, other: &Generator) -> bool {
        self.atom == other.atom && self.inverse != other.inverse
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}⁻¹", self.atom)
        } else {
            write!(f, "{}", self.atom)
        }
    }
}

/// A freely reduced word of the free group over atoms. Always kept reduced,
/// so equality of words is equality of group elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord(Vec<Generator>);

impl GroupWord {
    pub fn identity() -> GroupWord {
        GroupWord(Vec::new())
    }

    pub fn generator(atom: Atom) -> GroupWord {
        GroupWord(vec![Generator { atom, inverse: false }])
    }

    /// Builds a word from arbitrary generators, reducing it.
    pub fn from_generators(gens: impl IntoIterator<Item = Generator>) -> GroupWord {
        let mut w = GroupWord::identity();
        for g in gens {
            w.push(g);
        }
        w
    }

    fn push(&mut self, g: Generator) {
        if self.0.last().is_some_and(|last| last.cancels(&g)) {
            self.0.pop();
        } else {
            self.0.push(g);
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut out = self.clone();
        for g in &other.0 {
            out.push(g.clone());
        }
        out
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(Generator::inverted).collect())
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// `a ↦ a`, `A\B ↦ A⁻¹·B`, `B/A ↦ B·A⁻¹`.
pub fn group_image(c: &Category) -> GroupWord {
    match c {
        Category::Atom(a) => GroupWord::generator(a.clone()),
        Category::Under(a, b) => group_image(a).inverse().mul(&group_image(b)),
        Category::Over(b, a) => group_image(b).mul(&group_image(a).inverse()),
    }
}

/// Reduced product of the images of a sequence of categories.
pub fn antecedent_image<'a>(antecedent: impl IntoIterator<Item = &'a Category>) -> GroupWord {
    antecedent.into_iter().fold(GroupWord::identity(), |acc, c| acc.mul(&group_image(c)))
}

/// Necessary condition for `antecedent ⊢ goal`: both sides have the same image
/// in the free group. `false` proves the sequent underivable; `true` says
/// nothing.
pub fn group_check(antecedent: &[Category], goal: &Category) -> bool {
    antecedent_image(antecedent) == group_image(goal)
}
