#pragma once

#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semprosody/error.hpp"

// Bundled word lists. Every list can be replaced at run time by a
// word-per-line UTF-8 file (see load_word_set).

namespace semprosody {

using WordSet = std::set<std::string, std::less<>>;

inline WordSet load_word_set(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open word list: " + path);
  WordSet out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#')
      continue;
    const auto last = line.find_last_not_of(" \t");
    out.insert(line.substr(first, last - first + 1));
  }
  return out;
}

namespace resources {

inline WordSet en_be_forms() {
  return {"am", "is", "are", "was", "were", "be", "been", "being",
          "'m", "'s", "'re", "’m", "’s", "’re"};
}

inline WordSet en_get_forms() {
  return {"get", "gets", "got", "gotten", "getting"};
}

inline WordSet en_negation() { return {"not", "n't", "n’t", "never"}; }

inline WordSet en_adverbs() {
  return {"also",  "already", "just",  "quite",  "so",    "all",
          "still", "very",    "too",   "always", "often", "ever",
          "even",  "now",     "then",  "soon",   "much",  "well",
          "rather", "almost", "once",  "both"};
}

/// Words ending in "-ed" that are not participles.
inline WordSet en_ed_exceptions() {
  return {"indeed", "need",   "seed",    "feed",   "speed",
          "breed",  "bleed",  "deed",    "creed",   "greed",  "weed",
          "steed",  "hundred", "kindred", "sacred", "naked",  "wicked",
          "wretched", "rugged", "ragged", "crooked", "hatred", "sled",
          "embed",  "proceed", "exceed", "succeed"};
}

/// Irregular English past participles.
inline WordSet en_irregular_participles() {
  return {
      "arisen",    "awoken",     "beaten",     "become",     "begun",
      "bent",      "bet",        "bid",        "bidden",     "bitten",
      "bled",      "blown",      "born",       "borne",      "bought",
      "bound",     "bred",       "broken",     "brought",    "built",
      "burnt",     "burst",      "cast",       "caught",     "chosen",
      "clung",     "come",       "cost",       "crept",      "cut",
      "dealt",     "dug",        "done",       "drawn",      "dreamt",
      "driven",    "drunk",      "dwelt",      "eaten",      "fallen",
      "fed",       "felt",       "fled",       "flung",      "flown",
      "forbidden", "forecast",   "foreseen",   "forgiven",   "forgotten",
      "forsaken",  "frozen",     "fought",     "found",      "given",
      "gone",      "gotten",     "ground",     "grown",      "heard",
      "held",      "hewn",       "hidden",     "hit",        "hung",
      "hurt",      "kept",       "knelt",      "knit",       "known",
      "laid",      "lain",       "leant",      "learnt",     "led",
      "left",      "lent",       "let",        "lit",        "lost",
      "made",      "meant",      "met",        "misled",     "mislaid",
      "mistaken",  "misunderstood", "mown",    "outdone",    "overcome",
      "overdone",  "overheard",  "overlooked", "overrun",    "overseen",
      "overtaken", "overthrown", "paid",       "proven",     "put",
      "quit",      "read",       "rebuilt",    "redone",     "remade",
      "rent",      "retold",     "rewritten",  "rid",        "ridden",
      "risen",     "rung",       "run",        "said",       "sawn",
      "seen",      "sent",       "set",        "sewn",       "shaken",
      "shaven",    "shed",       "shorn",      "shot",       "shown",
      "shrunk",    "shut",       "slain",      "slept",      "slid",
      "slung",     "slit",       "smelt",      "sold",       "sought",
      "sown",      "sped",       "spelt",      "spent",      "spilt",
      "spit",      "spat",       "split",      "spoilt",     "spoken",
      "spread",    "sprung",     "spun",       "stolen",     "stood",
      "strewn",    "stricken",   "stridden",   "striven",    "struck",
      "strung",    "stuck",      "stung",      "stunk",      "sung",
      "sunk",      "swept",      "sworn",      "swollen",    "swum",
      "swung",     "taken",      "taught",     "thought",    "thrown",
      "thrust",    "told",       "torn",       "trodden",    "understood",
      "undertaken", "undone",    "upheld",     "upset",      "wed",
      "wept",      "withdrawn",  "withheld",   "withstood",  "woken",
      "won",       "worn",       "wound",      "woven",      "written",
      "wrung",     "beheld",     "begotten",   "dived",      "forborne"};
}

/// Finite and non-finite forms of ser and estar.
inline WordSet es_ser_estar_forms() {
  return {
      "ser",       "soy",       "eres",      "es",        "somos",
      "sois",      "son",       "era",       "eras",      "éramos",
      "erais",     "eran",      "fui",       "fuiste",    "fue",
      "fuimos",    "fuisteis",  "fueron",    "seré",      "serás",
      "será",      "seremos",   "seréis",    "serán",     "sería",
      "serías",    "seríamos",  "seríais",   "serían",    "sea",
      "seas",      "seamos",    "seáis",     "sean",      "fuera",
      "fueras",    "fuéramos",  "fuerais",   "fueran",    "fuese",
      "fueses",    "fuésemos",  "fueseis",   "fuesen",    "sido",
      "siendo",    "estar",     "estoy",     "estás",     "está",
      "estamos",   "estáis",    "están",     "estaba",    "estabas",
      "estábamos", "estabais",  "estaban",   "estuve",    "estuviste",
      "estuvo",    "estuvimos", "estuvisteis", "estuvieron", "estaré",
      "estarás",   "estará",    "estaremos", "estaréis",  "estarán",
      "estaría",   "estarías",  "estaríamos", "estaríais", "estarían",
      "esté",      "estés",     "estemos",   "estéis",    "estén",
      "estuviera", "estuvieras", "estuviéramos", "estuvierais", "estuvieran",
      "estuviese", "estuvieses", "estuviésemos", "estuvieseis", "estuviesen",
      "estado",    "estando"};
}

/// Irregular Spanish participles, masculine singular; inflected forms are
/// derived by the detector.
inline WordSet es_irregular_participles() {
  return {"hecho",     "dicho",     "visto",     "puesto",    "escrito",
          "abierto",   "roto",      "muerto",    "vuelto",    "cubierto",
          "descubierto", "resuelto", "devuelto", "envuelto",  "impreso",
          "frito",     "satisfecho", "deshecho", "propuesto", "compuesto",
          "dispuesto", "expuesto",  "supuesto",  "impuesto",  "opuesto",
          "previsto",  "inscrito",  "descrito",  "prescrito", "suscrito",
          "provisto",  "absuelto",  "disuelto",  "revuelto",  "predicho",
          "contradicho", "rehecho", "maldito",   "bendito",   "preso",
          "electo",    "encubierto", "entrevisto", "repuesto", "transcrito"};
}

inline WordSet es_negation() { return {"no", "nunca", "jamás"}; }

inline WordSet es_adverbs() {
  return {"muy", "ya", "siempre", "también", "tan", "bien", "mal",
          "todavía", "aún", "casi", "luego", "pronto", "así", "más", "menos"};
}

/// Spanish words with participle endings that are not participles.
inline WordSet es_participle_exceptions() {
  return {"nada", "cada", "vida", "lado", "todo", "medida", "salida",
          "comida", "bebida", "partida", "llegada", "mirada", "entrada",
          "estado", "pasado", "helado", "soldado", "abogado", "mercado",
          "pecado", "cuidado", "grado", "prado", "marido", "ruido",
          "sentido", "partido", "vestido", "apellido", "nido", "olvido"};
}

/// Delexicalised verbs whose complement carries passive meaning.
inline WordSet zh_light_verbs() { return {"受到", "遭到", "遭受", "受"}; }

/// Words formed with 被 that are not the passive marker. A 被 token is
/// excluded when it forms one of these with its neighbour.
inline WordSet zh_bei_exclusion() {
  return {"被子", "棉被", "被动", "被告", "被单", "被褥", "被窝",
          "被面", "被套", "被里", "盖被", "被头"};
}

/// Aspect markers and structural particles skipped when locating a verb.
inline WordSet zh_particles() {
  return {"了", "着", "过", "所", "给", "的", "地", "得"};
}

/// Single characters that are nominal (pronouns and common nouns), so a
/// lone character after 被 is not automatically read as the verb.
inline WordSet zh_nominal_chars() {
  return {"我", "你", "他", "她", "它", "您", "人", "谁", "狗", "猫",
          "狼", "马", "牛", "风", "雨", "雪", "水", "火", "车", "鬼",
          "贼", "兵", "妈", "爸", "哥", "姐", "家", "国", "天", "神"};
}

/// Adverbs allowed between a topic and its verb in a notional passive.
inline WordSet zh_topic_adverbs() {
  return {"都", "也", "已经", "已", "就", "还", "早已", "全", "均", "全部", "都已"};
}

/// Common transitive verbs and verbal nouns.
inline WordSet zh_verbs() {
  return {
      "打",   "杀",   "抓",   "拖",   "骗",   "偷",   "抢",   "撞",   "咬",
      "吃",   "关",   "赶",   "卖",   "买",   "带",   "拉",   "推",   "踢",
      "砍",   "烧",   "毁",   "炸",   "淹",   "埋",   "捆",   "绑",   "捉",
      "拒",   "罚",   "骂",   "笑",   "夸",   "逼",   "送",   "拿",   "放",
      "叫",   "请",   "告诉", "告知", "表扬", "批评", "称赞", "赞扬", "夸奖",
      "打败", "打断", "打死", "打伤", "杀死", "杀害", "害死", "逮捕", "抓住",
      "抓走", "带走", "赶走", "赶出", "拖出", "拖走", "拉走", "抢走", "偷走",
      "吃掉", "烧毁", "毁掉", "摧毁", "破坏", "伤害", "欺负", "欺骗", "出卖",
      "抛弃", "遗弃", "拒绝", "开除", "解雇", "处罚", "惩罚", "判处", "枪毙",
      "囚禁", "关押", "监禁", "绑架", "包围", "攻击", "袭击", "侵略", "占领",
      "污染", "感染", "淹没", "吞没", "埋葬", "遗忘", "忘记", "发现", "看见",
      "听见", "录取", "选为", "选中", "任命", "邀请", "接受", "称为", "叫做",
      "当作", "看作", "视为", "保存", "保留", "保护", "收藏", "建造", "修建",
      "建成", "写", "写成", "翻译", "出版", "发表", "打扫", "清理", "整理",
      "安排", "送到", "送往", "带到", "运到", "搬走", "拆除", "撕碎", "打碎",
      "打开", "关上", "锁上", "吵醒", "惊醒", "吓坏", "吓", "激怒", "打动",
      "感动", "迷住", "困住", "难住", "骗走", "误解", "冤枉", "怀疑", "指控",
      "起诉", "审判", "判刑", "嘲笑", "侮辱", "羞辱", "折磨", "虐待", "打扰",
      "影响", "打击", "尊重", "欢迎", "爱戴", "照顾", "培养", "教育", "治疗",
      "处理", "解决", "完成", "修理", "修好", "治好", "救", "救出", "释放",
      "允许", "禁止", "要求", "命令", "派", "派往", "撤职", "提升", "提拔",
      "奖励", "表彰", "认出", "认为", "看到", "听到", "找到", "找回", "偷听",
      "砍伤", "刺伤", "咬伤", "烫伤", "压死", "撞死", "撞倒", "推倒", "击败",
      "击中", "击毙", "射中", "淘汰", "拍", "拍摄", "记录", "记住", "收到",
      "待", "对待", "看待", "养大", "抚养", "埋没", "掩盖", "隐藏", "藏",
      "换", "换掉", "改", "改变", "改造", "打发", "支走", "抬", "抬走",
      "抬出", "扔", "扔掉", "丢", "丢弃", "吹", "吹走", "冲走", "卷走",
      "刮", "刮倒", "冻", "冻死", "饿死", "困", "锁", "拴", "蒙", "蒙骗",
      "捂", "压", "压垮", "掐", "勒", "勒死", "打昏", "打晕", "迷倒",
      "说服", "打败", "征服", "控制", "操纵", "利用", "收买", "诬陷", "陷害",
      "告诫", "告发", "告上", "动员", "打中"};
}

/// Inanimate or non-agentive nouns that can head a notional passive.
inline WordSet zh_patient_lexicon() {
  return {"它们", "它", "这些", "那些", "这", "那", "房子", "书", "信",
          "门", "窗户", "窗", "饭", "菜", "作业", "文件", "信件", "照片",
          "画", "衣服", "桥", "楼", "路", "车", "船", "文物", "东西", "钱",
          "报告", "问题", "任务", "工作", "计划", "消息", "文章", "茶"};
}

/// Default forward-maximum-matching dictionary. Includes the multi-character
/// 被 words so that they never surface as the passive marker, and split
/// entries for the common passives those words would otherwise swallow.
inline std::vector<std::string_view> zh_segmentation_words() {
  return {
      // 被 words
      "被子", "棉被", "被动", "被告", "被单", "被褥", "被窝", "被面", "被套",
      "被 告知", "被 告诫", "被 告发", "被 告上", "被 子弹", "被 动员", "被 单独",
      "告诫", "告发", "告上", "子弹", "动员", "单独", "打中",
      // light verbs and frequent compounds with 受
      "受到", "遭到", "遭受", "受伤", "受苦", "受罪", "受骗", "受害", "享受",
      "接受", "难受", "感受", "忍受", "承受", "受欢迎",
      // pronouns and people
      "我们", "你们", "他们", "她们", "它们", "自己", "人家", "大家", "别人",
      "有人", "老师", "学生", "朋友", "儿子", "女儿", "父亲", "母亲", "妈妈",
      "爸爸", "孩子", "妻子", "丈夫", "哥哥", "姐姐", "弟弟", "妹妹", "先生",
      "医生", "警察", "士兵", "敌人", "邻居", "村民", "农民", "主人", "老板",
      "经理", "同学", "同事", "客人", "强盗", "小偷", "土匪", "军队", "日本兵",
      "李四", "张三", "王五", "家珍", "福贵", "老人", "女人", "男人", "少年",
      "姑娘", "母亲", "祖母", "祖父", "国王", "王子", "公主", "法官",
      // places and things
      "家里", "房子", "房间", "学校", "医院", "监狱", "村子", "城里", "外面",
      "门口", "窗户", "桌子", "椅子", "东西", "衣服", "文件", "信件", "照片",
      "作业", "文物", "肚子", "双手", "眼睛", "头发", "身体", "钱包", "汽车",
      "自行车", "大火", "洪水", "暴风", "大雨", "石头", "森林", "河水", "报纸",
      "报告", "问题", "任务", "工作", "计划", "消息", "文章", "故事", "书信",
      "时候", "晚上", "早上", "昨天", "今天", "明天", "后来", "那里", "这里",
      "世界", "国家", "城市", "战争", "事情", "生活", "生命", "机会", "比赛",
      "礼物", "奖品", "奖金", "名字", "工厂", "公司", "政府", "法院",
      // verbs and verbal nouns
      "告诉", "告知", "表扬", "批评", "称赞", "赞扬", "夸奖", "打败", "打断",
      "打死", "打伤", "杀死", "杀害", "害死", "逮捕", "抓住", "抓走", "带走",
      "赶走", "赶出", "拖出", "拖走", "拉走", "抢走", "偷走", "吃掉", "烧毁",
      "毁掉", "摧毁", "破坏", "伤害", "欺负", "欺骗", "出卖", "抛弃", "遗弃",
      "拒绝", "开除", "解雇", "处罚", "惩罚", "判处", "枪毙", "囚禁", "关押",
      "监禁", "绑架", "包围", "攻击", "袭击", "侵略", "占领", "污染", "感染",
      "淹没", "吞没", "埋葬", "遗忘", "忘记", "发现", "看见", "听见", "录取",
      "选为", "选中", "任命", "邀请", "称为", "叫做", "当作", "看作", "视为",
      "保存", "保留", "保护", "收藏", "建造", "修建", "建成", "写成", "翻译",
      "出版", "发表", "打扫", "清理", "整理", "安排", "送到", "送往", "带到",
      "运到", "搬走", "拆除", "撕碎", "打碎", "打开", "关上", "锁上", "吵醒",
      "惊醒", "吓坏", "激怒", "打动", "感动", "迷住", "困住", "难住", "骗走",
      "误解", "冤枉", "怀疑", "指控", "起诉", "审判", "判刑", "嘲笑", "侮辱",
      "羞辱", "折磨", "虐待", "打扰", "影响", "打击", "尊重", "欢迎", "爱戴",
      "照顾", "培养", "教育", "治疗", "处理", "解决", "完成", "修理", "修好",
      "治好", "救出", "释放", "允许", "禁止", "要求", "命令", "派往", "撤职",
      "提升", "提拔", "奖励", "表彰", "认出", "认为", "看到", "听到", "找到",
      "找回", "偷听", "砍伤", "刺伤", "咬伤", "烫伤", "压死", "撞死", "撞倒",
      "推倒", "击败", "击中", "击毙", "射中", "淘汰", "拍摄", "记录", "记住",
      "收到", "对待", "看待", "养大", "抚养", "埋没", "掩盖", "隐藏", "换掉",
      "改变", "改造", "打发", "支走", "抬走", "抬出", "扔掉", "丢弃", "吹走",
      "冲走", "卷走", "刮倒", "冻死", "饿死", "蒙骗", "压垮", "勒死", "打昏",
      "打晕", "迷倒", "说服", "征服", "控制", "操纵", "利用", "收买", "诬陷",
      "陷害", "出去", "进来", "回来", "回家", "离开", "到达", "喜欢", "知道",
      "觉得", "希望", "帮助", "帮忙", "参加", "开始", "结束", "准备", "决定",
      "玩", "恶作剧", "把戏", "发疯", "游戏", "工作", "学习", "吃饭", "睡觉",
      "说话", "唱歌", "跳舞", "旅行", "出发", "等待", "相信", "同意", "成功",
      "失败", "死去", "活着", "哭泣", "微笑", "欢笑", "捂着", "凸起",
      // adjectives and adverbs
      "非常", "十分", "已经", "一直", "总是", "突然", "终于", "马上", "仍然",
      "完整", "很好", "高兴", "快乐", "幸福", "痛苦", "悲伤", "可怕", "危险",
      "美丽", "漂亮", "聪明", "勇敢", "善良", "残忍", "愤怒", "害怕", "紧紧",
      "疯狂", "如此", "一样", "所有", "各种", "好多", "许多", "一些", "这样",
      "那样", "因为", "所以", "但是", "可是", "而且", "如果", "虽然", "然后",
      "时候", "的时候", "一起", "没有", "不是", "就是", "还是", "只是", "可以",
      "应该", "必须", "能够", "情况", "事已至此", "严重", "残酷", "无情"};
}

} // namespace resources
} // namespace semprosody
