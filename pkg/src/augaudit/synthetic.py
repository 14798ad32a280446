"""Seeded generator of synthetic Java-like flaky tests.

Each case mixes statements typical of its category with generic and
confuser statements from other categories. Every origin also carries a few
origin-specific names (a helper method and a class under test) in call and
type positions, which augmentation preserves; these model the
project-specific vocabulary a variant shares with its original.
"""
from __future__ import annotations

from dataclasses import dataclass

from .corpus import FLAKYCAT_LABELS, Corpus, TestCase, make_corpus
from .prng import SplitMix64, derive_seed

_CATEGORY_TEMPLATES: dict[str, list[str]] = {
    "Async": [
        "CountDownLatch {a} = new CountDownLatch({n});",
        "{r}.await({n}, TimeUnit.SECONDS);",
        "Thread.sleep({n}00);",
        'CompletableFuture<String> {a} = CompletableFuture.supplyAsync(() -> "{s}");',
        "Future<?> {a} = executor.submit(() -> {r}.countDown());",
        "String {a} = {r}.get({n}, TimeUnit.MILLISECONDS);",
        "Awaitility.await().atMost({n}, TimeUnit.SECONDS).until(() -> {r}.isDone());",
        "waitForCompletion({r}, {n});",
        "{r}.thenAccept(x -> callback.onResult(x));",
    ],
    "UC": [
        "Map<String, Integer> {a} = new HashMap<>();",
        '{r}.put("{s}", {n});',
        'Set<String> {a} = new HashSet<>(Arrays.asList("{s}", "{s}"));',
        'assertEquals("[{s}, {s}]", {r}.toString());',
        "List<String> {a} = new ArrayList<>({r}.keySet());",
        "Iterator<String> {a} = {r}.iterator();",
        'assertEquals("{s}", {r}.next());',
        "for (Map.Entry<String, Integer> {a} : {r}.entrySet()) {{ names.add({a}.getKey()); }}",
        "String {a} = new JSONObject({r}).toString();",
        "assertArrayEquals(expectedKeys, {r}.keySet().toArray());",
    ],
    "Conc": [
        "AtomicInteger {a} = new AtomicInteger();",
        "Thread {a} = new Thread(() -> {r}.incrementAndGet());",
        "{r}.start();",
        "{r}.join();",
        "synchronized ({r}) {{ {r}.notifyAll(); }}",
        "ExecutorService {a} = Executors.newFixedThreadPool({n});",
        "{r}.invokeAll(tasks);",
        "ReentrantLock {a} = new ReentrantLock();",
        "{r}.lock();",
        "ConcurrentHashMap<String, Integer> {a} = new ConcurrentHashMap<>();",
        "CyclicBarrier {a} = new CyclicBarrier({n});",
    ],
    "Time": [
        "long {a} = System.currentTimeMillis();",
        "LocalDateTime {a} = LocalDateTime.now();",
        "Date {a} = new Date();",
        'Calendar {a} = Calendar.getInstance(TimeZone.getTimeZone("{s}"));',
        "assertEquals({n}, {r}.get(Calendar.HOUR_OF_DAY));",
        "long {a} = System.nanoTime() - {r};",
        "assertTrue(Duration.between({r}, Instant.now()).toMillis() < {n});",
        'SimpleDateFormat {a} = new SimpleDateFormat("{s}");',
        "String {a} = {r}.format(new Date());",
        "ZonedDateTime {a} = ZonedDateTime.now(ZoneId.systemDefault());",
    ],
    "TOD": [
        'Registry.getInstance().register("{s}", {r});',
        'System.setProperty("{s}", "{s}");',
        'String {a} = System.getProperty("{s}");',
        "Config.reset();",
        'Object {a} = GlobalCache.lookup("{s}");',
        "assertNull(StaticHolder.current);",
        "StaticHolder.counter++;",
        "Database.clear();",
        "assertEquals({n}, Registry.getInstance().size());",
        "SharedState.initialize({r});",
    ],
}

_COMMON_TEMPLATES = [
    'String {a} = "{s}";',
    "int {a} = {n};",
    "assertNotNull({r});",
    "assertTrue({r} != null);",
    "List<String> {a} = new ArrayList<>();",
    '{r}.add("{s}");',
    'Object {a} = service.create("{s}");',
    'if ({r} == null) {{ fail("{s}"); }}',
    "assertEquals({r}, {r});",
    "try {{ process({r}); }} catch (Exception {a}) {{ fail({a}.getMessage()); }}",
    "for (int {a} = 0; {a} < {n}; {a}++) {{ consume({a}); }}",
    "// {s} {s}",
    "char {a} = '{c}';",
    'String {a} = "{s}\\t{s}\\"";',
    "int[] {a} = {{{n}, {n}}};",
    "if ({r} != null) {{ log.info(\"{s}\"); }} else {{ log.warn(\"{s}\"); }}",
    "switch ({n}) {{ case 1: consume({r}); break; default: consume(null); }}",
    "Runnable {a} = new Runnable() {{ public void run() {{ consume({r}); }} }};",
    "/* {s} */ assertFalse({r} == null);",
    "Optional<String> {a} = Optional.ofNullable({r}).map(v -> v.toString());",
]

_HELPER_TEMPLATES = [
    "{h}({r});",
    "Object {a} = {h}();",
    'fixture.{h}("{s}");',
    "{H} {a} = new {H}({r});",
    "{r} = {H}.{h}({n});",
]

_LOCAL_NAMES = (
    "result value count list map latch future item data expected actual response "
    "index key entry task service lock start elapsed names counter output input "
    "handler worker client session buffer status record"
).split()

_STRING_WORDS = (
    "alpha beta gamma delta value test user admin config ready done error ok "
    "hello world first second timeout server client"
).split()

_SYLLABLES = "ba be bi bo bu da de di do du ka ke ki ko ku la le li lo lu ma me mi mo mu na ne ni no nu ra re ri ro ru sa se si so su ta te ti to tu va ve vi vo vu za ze zi zo zu".split()


@dataclass(frozen=True)
class SyntheticConfig:
    originals_per_category: int = 40
    labels: tuple[str, ...] = FLAKYCAT_LABELS
    statements_range: tuple[int, int] = (8, 16)
    own_category_prob: float = 0.35  # per statement
    confuser_prob: float = 0.3  # per statement; rest are generic
    helper_uses_range: tuple[int, int] = (3, 5)
    wrap_class_prob: float = 0.3


def _word(rng: SplitMix64, syllables: int) -> str:
    return "".join(rng.choice(_SYLLABLES) for _ in range(syllables))


def _camel(rng: SplitMix64, parts: int) -> str:
    return "".join(_word(rng, 2).capitalize() for _ in range(parts))


class _Builder:
    def __init__(self, rng: SplitMix64, helper: str, helper_type: str):
        self.rng = rng
        self.helper = helper
        self.helper_type = helper_type
        self.locals: list[str] = []

    def _local(self) -> str:
        free = [n for n in _LOCAL_NAMES if n not in self.locals]
        name = self.rng.choice(free) if free else f"v{len(self.locals)}"
        self.locals.append(name)
        return name

    def render(self, template: str) -> str:
        rng = self.rng
        ref = rng.choice(self.locals) if self.locals else "fixture"
        a = self._local() if "{a}" in template else ""
        fields = dict(
            a=a,
            r=ref,
            n=rng.randint(1, 9),
            s=rng.choice(_STRING_WORDS),
            c=rng.choice("abcxyz"),
            h=self.helper,
            H=self.helper_type,
        )
        return template.format(**fields)


def generate_case(
    rng: SplitMix64,
    case_id: str,
    category: str,
    config: SyntheticConfig = SyntheticConfig(),
) -> TestCase:
    helper = _word(rng, 3) + _camel(rng, 1)
    helper_type = _camel(rng, 2) + "Service"
    b = _Builder(rng, helper, helper_type)
    others = [c for c in config.labels if c != category and c in _CATEGORY_TEMPLATES]
    n_stmts = rng.randint(*config.statements_range)
    helper_slots = set()
    n_helper = rng.randint(*config.helper_uses_range)
    while len(helper_slots) < min(n_helper, n_stmts):
        helper_slots.add(rng.below(n_stmts))

    lines = []
    for k in range(n_stmts):
        if k in helper_slots:
            template = rng.choice(_HELPER_TEMPLATES)
        else:
            u = rng.random()
            if u < config.own_category_prob and category in _CATEGORY_TEMPLATES:
                template = rng.choice(_CATEGORY_TEMPLATES[category])
            elif u < config.own_category_prob + config.confuser_prob and others:
                template = rng.choice(_CATEGORY_TEMPLATES[rng.choice(others)])
            else:
                template = rng.choice(_COMMON_TEMPLATES)
        lines.append(b.render(template))

    name = "test" + _camel(rng, 2)
    body = "\n".join("        " + line for line in lines)
    method = f"    @Test\n    public void {name}() throws Exception {{\n{body}\n    }}\n"
    if rng.random() < config.wrap_class_prob:
        cls = _camel(rng, 1) + "Test"
        setup = (
            "    private " + helper_type + " fixture;\n\n"
            "    @Before\n    public void setUp() {\n"
            f"        fixture = new {helper_type}();\n    }}\n\n"
        )
        code = f"public class {cls} {{\n{setup}{method}}}\n"
    else:
        code = method
    return TestCase(case_id, case_id, 0, category, code)


def generate_corpus(seed: int, config: SyntheticConfig = SyntheticConfig()) -> Corpus:
    """Originals only; ``config.originals_per_category`` per label."""
    rng = SplitMix64(derive_seed(seed, "synthetic"))
    cases = []
    for cat in config.labels:
        for i in range(config.originals_per_category):
            cases.append(generate_case(rng, f"{cat.lower()}_{i:04d}", cat, config))
    return make_corpus(cases, labels=config.labels)
